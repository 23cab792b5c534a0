#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "citree/dataset.hpp"
#include "citree/eval.hpp"
#include "citree/importance.hpp"
#include "citree/report.hpp"
#include "citree/tree.hpp"

namespace {

using namespace citree;

std::string resolve_output(const std::string& path) {
    // CITREE_OUTPUT_DIR supplies a default directory for bare file names.
    if (path.find('/') == std::string::npos) {
        if (const char* dir = std::getenv("CITREE_OUTPUT_DIR")) {
            return std::string(dir) + "/" + path;
        }
    }
    return path;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open input file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    const std::string resolved = resolve_output(path);
    std::ofstream out(resolved);
    if (!out) throw SchemaError("cannot open output file: " + resolved);
    return out;
}

Dataset load_dataset(const std::string& path) {
    auto in = open_input(path);
    return parse_dataset_csv(in);
}

Tree load_tree(const std::string& path) {
    auto in = open_input(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_tree(buf.str());
}

void write_text(const std::string& path, const std::string& text) {
    auto out = open_output(path);
    out << text;
}

StratumSpec parse_take(const std::string& text) {
    StratumSpec spec;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        Stratum s;
        const auto c1 = item.find(':');
        if (c1 == std::string::npos) throw ConfigError("--take entries must be level:count");
        s.level = std::stoi(item.substr(0, c1));
        const auto c2 = item.find(':', c1 + 1);
        if (c2 == std::string::npos) {
            s.take = std::stol(item.substr(c1 + 1));
        } else {
            s.take = std::stol(item.substr(c1 + 1, c2 - c1 - 1));
            s.population = std::stol(item.substr(c2 + 1));
        }
        spec.strata.push_back(s);
    }
    if (spec.strata.empty()) throw ConfigError("--take is empty");
    return spec;
}

ImpurityFunction impurity_from_name(const std::string& name) {
    if (name == "deviance") return deviance_impurity();
    if (name == "gini") return gini_impurity();
    throw ConfigError("unknown impurity '" + name + "' (expected deviance or gini)");
}

struct CommonGrowth {
    long mincut = 3;
    long minsize = 6;
    double mindev = 0.01;
    std::string impurity = "deviance";

    GrowthControl control() const { return GrowthControl{mincut, minsize, mindev}; }

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--mincut", mincut, "Minimum observations in each child node");
        cmd->add_option("--minsize", minsize, "Minimum observations in a splittable node");
        cmd->add_option("--mindev", mindev,
                        "Skip nodes with deviance below this fraction of the root deviance");
        cmd->add_option("--impurity", impurity, "Splitting criterion: deviance or gini");
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"citation classification tree toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value config file; flags take precedence");
    app.allow_config_extras(false);

    std::string input, output, tree_path, format_name = "text";

    // derive
    auto* derive = app.add_subcommand("derive", "Raw paper-record CSV -> predictor CSV");
    std::string home_country = "JP";
    derive->add_option("--input", input, "Record CSV")->required();
    derive->add_option("--output", output, "Predictor CSV")->required();
    derive->add_option("--home-country", home_country, "Country code used for jpper");

    // sample
    auto* sample = app.add_subcommand("sample", "Stratified sample per citation level");
    std::uint64_t seed = 0;
    std::string take_text;
    bool reference = false;
    sample->add_option("--input", input, "Dataset CSV")->required();
    sample->add_option("--output", output, "Sampled dataset CSV")->required();
    sample->add_option("--seed", seed, "RNG seed")->required();
    sample->add_option("--take", take_text, "Per-stratum sizes, e.g. 5:4,4:23,...");
    sample->add_flag("--reference", reference, "Use the 305-row reference stratum sizes");

    // grow
    auto* grow = app.add_subcommand("grow", "Grow a classification tree from a dataset");
    CommonGrowth growth;
    std::string summary_path;
    grow->add_option("--input", input, "Dataset CSV")->required();
    grow->add_option("--output", output, "Tree document (JSON)")->required();
    grow->add_option("--summary", summary_path, "Also write the growth summary here");
    grow->add_option("--format", format_name, "Report format: tsv or text");
    growth.add_flags(grow);

    // summarize
    auto* summarize = app.add_subcommand("summarize", "Summarize a grown tree on a dataset");
    summarize->add_option("--tree", tree_path, "Tree document")->required();
    summarize->add_option("--input", input, "Dataset CSV")->required();
    summarize->add_option("--output", output, "Output file (default stdout)");
    summarize->add_option("--format", format_name, "Report format: tsv or text");

    // importance
    auto* importance = app.add_subcommand("importance", "Deviance-drop and shuffle importance");
    long k = 1000;
    bool serial = false;
    importance->add_option("--tree", tree_path, "Tree document")->required();
    importance->add_option("--input", input, "Dataset CSV")->required();
    importance->add_option("--k", k, "Shuffle trials per predictor");
    importance->add_option("--seed", seed, "RNG seed")->required();
    importance->add_option("--output", output, "Output file (default stdout)");
    importance->add_option("--format", format_name, "Report format: tsv or text");
    importance->add_flag("--serial", serial, "Disable parallel trial evaluation");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Confusion matrix or holdout protocols");
    long holdout = 0, trials = 1000;
    bool loo = false;
    CommonGrowth eval_growth;
    evaluate->add_option("--input", input, "Dataset CSV")->required();
    evaluate->add_option("--tree", tree_path, "Tree document (confusion-matrix mode)");
    evaluate->add_option("--holdout", holdout, "Holdout size per trial");
    evaluate->add_option("--trials", trials, "Number of holdout trials");
    evaluate->add_flag("--loo", loo, "Leave-one-out protocol");
    evaluate->add_option("--seed", seed, "RNG seed (required with --holdout)");
    evaluate->add_option("--output", output, "Output file (default stdout)");
    evaluate->add_option("--format", format_name, "Report format: tsv or text");
    evaluate->add_flag("--serial", serial, "Disable parallel trial evaluation");
    eval_growth.add_flags(evaluate);

    // describe
    auto* describe = app.add_subcommand("describe", "Group five-number summaries");
    std::string group_name = "single";
    std::string scatter_path;
    describe->add_option("--input", input, "Dataset CSV")->required();
    describe->add_option("--group", group_name, "Grouping: single (vs multi) or collab");
    describe->add_option("--output", output, "Output file (default stdout)");
    describe->add_option("--scatter", scatter_path, "Also write the mcq/citations scatter table");
    describe->add_option("--format", format_name, "Report format: tsv or text");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic test corpus");
    long n = 0;
    double noise = 0.0;
    std::string rule_text;
    synth->add_option("--n", n, "Row count")->required();
    synth->add_option("--seed", seed, "RNG seed")->required();
    synth->add_option("--rule", rule_text, "Planted rule, e.g. 'ref>20=high;else=low'");
    synth->add_option("--noise", noise, "Label noise rate in [0,1]");
    synth->add_option("--output", output, "Dataset CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*derive) {
            auto in = open_input(input);
            const auto records = parse_records_csv(in);
            const Dataset d = derive_dataset(records, home_country);
            auto out = open_output(output);
            emit_dataset_csv(d, out);
        } else if (*sample) {
            if (reference == !take_text.empty()) {
                throw ConfigError("sample: give exactly one of --take or --reference");
            }
            const StratumSpec spec = reference ? StratumSpec::reference_design() : parse_take(take_text);
            const Dataset d = stratified_sample(load_dataset(input), spec, seed);
            auto out = open_output(output);
            emit_dataset_csv(d, out);
        } else if (*grow) {
            const Dataset d = load_dataset(input);
            const Tree t = grow_tree(d, growth.control(), impurity_from_name(growth.impurity));
            write_text(output, encode_tree(t));
            std::ostringstream report;
            emit_summary(summarize_tree(t, d), format_from_name(format_name), report);
            if (summary_path.empty()) {
                std::cout << report.str();
            } else {
                write_text(summary_path, report.str());
            }
        } else if (*summarize) {
            const Dataset d = load_dataset(input);
            const Tree t = load_tree(tree_path);
            std::ostringstream report;
            emit_summary(summarize_tree(t, d), format_from_name(format_name), report);
            if (output.empty()) {
                std::cout << report.str();
            } else {
                write_text(output, report.str());
            }
        } else if (*importance) {
            const Dataset d = load_dataset(input);
            const Tree t = load_tree(tree_path);
            ShuffleOptions opts;
            opts.parallel = !serial;
            const ImportanceTable table =
                merge_importance(deviance_importance(t), shuffle_importance(t, d, k, seed, opts));
            std::ostringstream report;
            emit_importance(table, format_from_name(format_name), report);
            if (output.empty()) {
                std::cout << report.str();
            } else {
                write_text(output, report.str());
            }
        } else if (*evaluate) {
            const Dataset d = load_dataset(input);
            std::ostringstream report;
            const OutputFormat fmt = format_from_name(format_name);
            HoldoutOptions opts;
            opts.parallel = !serial;
            if (loo) {
                emit_holdout(leave_one_out(d, eval_growth.control(), opts), fmt, report);
            } else if (holdout > 0) {
                if (!evaluate->count("--seed")) {
                    throw ConfigError("evaluate --holdout requires --seed");
                }
                emit_holdout(
                    repeated_holdout(d, holdout, trials, eval_growth.control(), seed, opts), fmt,
                    report);
            } else {
                if (tree_path.empty()) {
                    throw ConfigError("evaluate needs --tree, --holdout, or --loo");
                }
                emit_confusion(confusion_matrix(load_tree(tree_path), d), fmt, report);
            }
            if (output.empty()) {
                std::cout << report.str();
            } else {
                write_text(output, report.str());
            }
        } else if (*describe) {
            const Dataset d = load_dataset(input);
            Grouping grouping;
            if (group_name == "single") {
                grouping = Grouping::SingleVsMulti;
            } else if (group_name == "collab") {
                grouping = Grouping::LocalVsInternational;
            } else {
                throw ConfigError("unknown --group '" + group_name + "' (single or collab)");
            }
            std::ostringstream report;
            const OutputFormat fmt = format_from_name(format_name);
            emit_groups(describe_groups(d, grouping), fmt, report);
            if (output.empty()) {
                std::cout << report.str();
            } else {
                write_text(output, report.str());
            }
            if (!scatter_path.empty()) {
                auto out = open_output(scatter_path);
                emit_scatter(scatter_export(d), fmt, out);
            }
        } else if (*synth) {
            SynthConfig cfg = rule_text.empty() ? SynthConfig{} : parse_rule(rule_text);
            cfg.n = n;
            cfg.seed = seed;
            cfg.noise = noise;
            const Dataset d = generate_synthetic(cfg);
            auto out = open_output(output);
            emit_dataset_csv(d, out);
        }
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
