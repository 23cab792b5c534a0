#include "citree/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "citree/rng.hpp"

namespace citree {

Row Dataset::make_row(const PredictorVector& v, CitationCount citations) {
    Row r;
    r.x = v.to_array();
    r.citations = citations;
    r.level = level_of_citations(citations);
    r.cls = class_of_level(r.level);
    return r;
}

bool operator==(const Row& a, const Row& b) {
    return a.x == b.x && a.cls == b.cls && a.citations == b.citations && a.level == b.level;
}

bool operator==(const Dataset& a, const Dataset& b) { return a.rows == b.rows; }

// ---------------------------------------------------------------------------
// CSV helpers
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& tok, const std::string& column, std::size_t row) {
    double v;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size()) {
        throw SchemaError("row " + std::to_string(row) + ", column '" + column +
                          "': non-numeric token '" + tok + "'");
    }
    return v;
}

long parse_long(const std::string& tok, const std::string& column, std::size_t row) {
    long v;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size()) {
        throw SchemaError("row " + std::to_string(row) + ", column '" + column +
                          "': non-integer token '" + tok + "'");
    }
    return v;
}

std::string format_number(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        return std::to_string(static_cast<long long>(v));
    }
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

} // namespace

Dataset parse_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty input: header row required");
    const auto header = split(line, ',');
    const auto& schema = predictor_schema();

    std::vector<int> col_to_pred(header.size(), -1); // -1 = citations, -2 invalid
    std::array<bool, kNumPredictors> seen{};
    bool seen_citations = false;
    int citations_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "citations") {
            seen_citations = true;
            citations_col = static_cast<int>(c);
            continue;
        }
        const int p = predictor_index(header[c]);
        if (p < 0) throw SchemaError("unknown column '" + header[c] + "'");
        if (seen[p]) throw SchemaError("duplicate column '" + header[c] + "'");
        seen[p] = true;
        col_to_pred[c] = p;
    }
    for (int p = 0; p < kNumPredictors; ++p) {
        if (!seen[p]) throw SchemaError("missing required column '" + schema[p].name + "'");
    }
    if (!seen_citations) throw SchemaError("missing required column 'citations'");

    Dataset d;
    std::size_t rowno = 0;
    while (std::getline(in, line)) {
        ++rowno;
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) {
            throw SchemaError("row " + std::to_string(rowno) + ": expected " +
                              std::to_string(header.size()) + " cells, got " +
                              std::to_string(cells.size()));
        }
        Row r;
        CitationCount cit = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (static_cast<int>(c) == citations_col) {
                cit = static_cast<CitationCount>(parse_long(cells[c], "citations", rowno));
                if (cit < 0) {
                    throw SchemaError("row " + std::to_string(rowno) +
                                      ": negative citation count");
                }
                continue;
            }
            const int p = col_to_pred[c];
            const auto& spec = schema[p];
            switch (spec.kind) {
                case ColumnKind::Numeric:
                    r.x[p] = parse_number(cells[c], spec.name, rowno);
                    break;
                case ColumnKind::Binary: {
                    const long v = parse_long(cells[c], spec.name, rowno);
                    if (v != 0 && v != 1) {
                        throw SchemaError("row " + std::to_string(rowno) + ", column '" +
                                          spec.name + "': value must be 0 or 1");
                    }
                    r.x[p] = static_cast<double>(v);
                    break;
                }
                case ColumnKind::Categorical8:
                    r.x[p] = static_cast<double>(
                        static_cast<int>(subject_from_name(cells[c])));
                    break;
            }
        }
        r.citations = cit;
        r.level = level_of_citations(cit);
        r.cls = class_of_level(r.level);
        d.rows.push_back(r);
    }
    return d;
}

void emit_dataset_csv(const Dataset& d, std::ostream& out) {
    const auto& schema = predictor_schema();
    for (int p = 0; p < kNumPredictors; ++p) out << schema[p].name << ',';
    out << "citations\n";
    for (const Row& r : d.rows) {
        for (int p = 0; p < kNumPredictors; ++p) {
            if (schema[p].kind == ColumnKind::Categorical8) {
                out << subject_name(static_cast<SubjectClass>(static_cast<int>(r.x[p])));
            } else {
                out << format_number(r.x[p]);
            }
            out << ',';
        }
        out << r.citations << '\n';
    }
}

// ---------------------------------------------------------------------------
// Stratified sampling
// ---------------------------------------------------------------------------

StratumSpec StratumSpec::reference_design() {
    return StratumSpec{{{5, 54, 4},
                        {4, 298, 23},
                        {3, 413, 23},
                        {2, 1008, 91},
                        {1, 628, 48},
                        {0, 1506, 116}}};
}

Dataset stratified_sample(const Dataset& d, const StratumSpec& spec, std::uint64_t seed) {
    std::array<std::vector<std::size_t>, 6> by_level;
    for (std::size_t i = 0; i < d.rows.size(); ++i) by_level[d.rows[i].level].push_back(i);

    auto strata = spec.strata;
    std::stable_sort(strata.begin(), strata.end(),
                     [](const Stratum& a, const Stratum& b) { return a.level > b.level; });

    Dataset out;
    for (const Stratum& s : strata) {
        if (s.level < 0 || s.level > 5) throw ConfigError("stratum level out of range 0..5");
        auto& pool = by_level[s.level];
        if (s.population > 0 && s.population != static_cast<long>(pool.size())) {
            throw SchemaError("stratum level " + std::to_string(s.level) + ": population " +
                              std::to_string(pool.size()) + " does not match spec " +
                              std::to_string(s.population));
        }
        if (s.take > static_cast<long>(pool.size())) {
            throw SchemaError("stratum level " + std::to_string(s.level) + " underfull: " +
                              std::to_string(pool.size()) + " rows, " +
                              std::to_string(s.take) + " requested");
        }
        // Per-stratum stream keyed by level, so the draw within one stratum
        // does not depend on the other strata.
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s.level)));
        std::vector<std::size_t> pool_copy = pool;
        partial_shuffle(pool_copy, static_cast<std::size_t>(s.take), rng);
        for (long i = 0; i < s.take; ++i) out.rows.push_back(d.rows[pool_copy[i]]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

namespace {

bool regions_overlap(const RuleRegion& a, const RuleRegion& b) {
    // Conjunctions of per-predictor intervals; overlap iff every predictor's
    // combined interval is non-empty.
    std::array<double, kNumPredictors> lo, hi;
    lo.fill(-1e300);
    hi.fill(1e300);
    for (const auto* region : {&a, &b}) {
        for (const auto& c : region->conditions) {
            lo[c.predictor] = std::max(lo[c.predictor], c.lo);
            hi[c.predictor] = std::min(hi[c.predictor], c.hi);
        }
    }
    for (int p = 0; p < kNumPredictors; ++p) {
        if (lo[p] >= hi[p]) return false;
    }
    return true;
}

void validate(const SynthConfig& cfg) {
    if (cfg.n < 0) throw ConfigError("negative row count");
    if (cfg.noise < 0.0 || cfg.noise > 1.0) throw ConfigError("noise rate outside [0,1]");
    auto check_probs = [](const std::array<double, kNumClasses>& p) {
        double sum = 0;
        for (double v : p) {
            if (v < 0) throw ConfigError("negative class probability");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("class probabilities must sum to 1");
    };
    check_probs(cfg.default_probs);
    for (const auto& r : cfg.regions) {
        check_probs(r.class_probs);
        for (const auto& c : r.conditions) {
            if (c.predictor < 0 || c.predictor >= kNumPredictors) {
                throw ConfigError("rule condition: predictor index out of range");
            }
            if (c.lo >= c.hi) throw ConfigError("rule condition: empty interval");
        }
    }
    for (std::size_t i = 0; i < cfg.regions.size(); ++i) {
        for (std::size_t j = i + 1; j < cfg.regions.size(); ++j) {
            if (regions_overlap(cfg.regions[i], cfg.regions[j]) &&
                cfg.regions[i].class_probs != cfg.regions[j].class_probs) {
                throw ConfigError("rule regions " + std::to_string(i) + " and " +
                                  std::to_string(j) +
                                  " overlap with conflicting probabilities");
            }
        }
    }
}

bool region_matches(const RuleRegion& region, const std::array<double, kNumPredictors>& x) {
    for (const auto& c : region.conditions) {
        if (!(x[c.predictor] > c.lo && x[c.predictor] <= c.hi)) return false;
    }
    return true;
}

ClassLabel draw_class(const std::array<double, kNumClasses>& probs, Rng& rng) {
    const double u = rng.unit();
    double acc = 0;
    for (int j = 0; j < kNumClasses; ++j) {
        acc += probs[j];
        if (u < acc) return static_cast<ClassLabel>(j);
    }
    return ClassLabel::High;
}

CitationCount citations_for_class(ClassLabel c, Rng& rng) {
    switch (c) {
        case ClassLabel::Low: return static_cast<CitationCount>(rng.below(2));
        case ClassLabel::Median: return 2 + static_cast<CitationCount>(rng.below(9));
        case ClassLabel::High: return 11 + static_cast<CitationCount>(rng.below(50));
    }
    return 0;
}

} // namespace

SynthConfig parse_rule(const std::string& text) {
    SynthConfig cfg;
    auto parse_probs = [](const std::string& tok) {
        std::array<double, kNumClasses> probs{};
        if (tok == "low" || tok == "median" || tok == "high") {
            probs[static_cast<int>(class_from_name(tok))] = 1.0;
            return probs;
        }
        const auto parts = split(tok, ',');
        if (parts.size() != kNumClasses) {
            throw ConfigError("rule class must be low/median/high or a probability triple");
        }
        for (int j = 0; j < kNumClasses; ++j) probs[j] = parse_number(parts[j], "rule", 0);
        return probs;
    };
    for (const std::string& seg : split(text, ';')) {
        if (seg.empty()) continue;
        const auto eq = seg.rfind('=');
        if (eq == std::string::npos) throw ConfigError("rule segment missing '=': " + seg);
        const std::string lhs = seg.substr(0, eq);
        const auto probs = parse_probs(seg.substr(eq + 1));
        if (lhs == "else") {
            cfg.default_probs = probs;
            continue;
        }
        RuleRegion region;
        region.class_probs = probs;
        for (const std::string& cond : split(lhs, '&')) {
            RuleCondition rc;
            std::size_t op;
            if ((op = cond.find("<=")) != std::string::npos) {
                rc.predictor = predictor_index(cond.substr(0, op));
                rc.hi = parse_number(cond.substr(op + 2), "rule", 0);
            } else if ((op = cond.find('>')) != std::string::npos) {
                rc.predictor = predictor_index(cond.substr(0, op));
                rc.lo = parse_number(cond.substr(op + 1), "rule", 0);
            } else {
                throw ConfigError("rule condition must use '>' or '<=': " + cond);
            }
            if (rc.predictor < 0) throw ConfigError("rule names unknown predictor: " + cond);
            region.conditions.push_back(rc);
        }
        cfg.regions.push_back(region);
    }
    return cfg;
}

Dataset generate_synthetic(const SynthConfig& cfg) {
    validate(cfg);
    Dataset d;
    d.rows.reserve(static_cast<std::size_t>(cfg.n));
    for (long i = 0; i < cfg.n; ++i) {
        // One stream per row keyed by the row index.
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
        PredictorVector v;
        v.aut = 1 + static_cast<int>(rng.below(6));
        int first_timers = 0;
        long age_sum = 0;
        for (int a = 0; a < v.aut; ++a) {
            const int age = static_cast<int>(rng.below(31));
            if (age == 0) ++first_timers;
            age_sum += age;
        }
        v.rfstp = static_cast<double>(first_timers) / v.aut;
        v.avacag = static_cast<double>(age_sum) / v.aut;
        v.inst = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(v.aut)));
        v.nati = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(v.inst)));
        v.jpper = static_cast<double>(rng.below(static_cast<std::uint64_t>(v.aut) + 1)) / v.aut;
        v.ref = static_cast<int>(rng.below(61));
        v.pg = 1 + static_cast<int>(rng.below(50));
        v.rt = rng.unit() < 0.8 ? 1 : 0;
        v.msccla = static_cast<SubjectClass>(rng.below(kNumSubjects));
        v.claper = static_cast<double>(rng.below(101)) / 100.0;
        v.mcq = static_cast<double>(rng.below(301)) / 100.0;
        v.cito2009 = static_cast<long>(rng.below(20001));

        const auto x = v.to_array();
        const std::array<double, kNumClasses>* probs = &cfg.default_probs;
        for (const auto& region : cfg.regions) {
            if (region_matches(region, x)) {
                probs = &region.class_probs;
                break;
            }
        }
        ClassLabel cls = draw_class(*probs, rng);
        if (cfg.noise > 0.0 && rng.unit() < cfg.noise) {
            cls = static_cast<ClassLabel>(rng.below(kNumClasses));
        }
        d.rows.push_back(Dataset::make_row(v, citations_for_class(cls, rng)));
    }
    return d;
}

// ---------------------------------------------------------------------------
// Raw record CSV for `derive`
// ---------------------------------------------------------------------------

namespace {
const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> cols = {
        "pub_year", "first_pub_years", "countries", "institutes", "ref", "pg", "rt",
        "msccla", "c2004", "c2005", "c2006", "c2007", "c2008", "n2004", "n2005",
        "n2006", "n2007", "n2008", "cito2009", "book", "subject_count",
        "subject_total", "citations"};
    return cols;
}
} // namespace

std::vector<PaperRecord> parse_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty input: header row required");
    const auto header = split(line, ',');
    const auto& cols = record_columns();
    if (header != cols) {
        std::string want;
        for (const auto& c : cols) want += (want.empty() ? "" : ",") + c;
        throw SchemaError("record CSV header must be exactly: " + want);
    }

    std::vector<PaperRecord> out;
    std::size_t rowno = 0;
    while (std::getline(in, line)) {
        ++rowno;
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != cols.size()) {
            throw SchemaError("row " + std::to_string(rowno) + ": wrong cell count");
        }
        auto cell = [&](const char* name) -> const std::string& {
            for (std::size_t c = 0; c < cols.size(); ++c) {
                if (cols[c] == name) return cells[c];
            }
            throw SchemaError("internal: unknown record column");
        };
        PaperRecord rec;
        rec.publication_year = static_cast<int>(parse_long(cell("pub_year"), "pub_year", rowno));
        const auto years = split(cell("first_pub_years"), ';');
        const auto countries = split(cell("countries"), ';');
        const auto institutes = split(cell("institutes"), ';');
        if (years.size() != countries.size() || years.size() != institutes.size()) {
            throw SchemaError("row " + std::to_string(rowno) +
                              ": author list fields have mismatched lengths");
        }
        for (std::size_t a = 0; a < years.size(); ++a) {
            rec.authors.push_back(AuthorRecord{
                static_cast<int>(parse_long(years[a], "first_pub_years", rowno)),
                countries[a], institutes[a]});
        }
        rec.references = static_cast<int>(parse_long(cell("ref"), "ref", rowno));
        rec.pages = static_cast<int>(parse_long(cell("pg"), "pg", rowno));
        rec.has_review_text = parse_long(cell("rt"), "rt", rowno) != 0;
        rec.subject = subject_from_name(cell("msccla"));
        for (int year = 2004; year <= 2008; ++year) {
            const std::string cname = "c" + std::to_string(year);
            const std::string nname = "n" + std::to_string(year);
            rec.journal.citations_by_year[year] =
                parse_long(cell(cname.c_str()), cname, rowno);
            rec.journal.publications_by_year[year] =
                parse_long(cell(nname.c_str()), nname, rowno);
        }
        rec.journal.accumulated_citations_to_2009 =
            parse_long(cell("cito2009"), "cito2009", rowno);
        rec.journal.is_book_or_thesis = parse_long(cell("book"), "book", rowno) != 0;
        rec.subject_history.counts_by_subject_2004_2008[rec.subject] =
            parse_long(cell("subject_count"), "subject_count", rowno);
        rec.subject_history.total_2004_2008 =
            parse_long(cell("subject_total"), "subject_total", rowno);
        rec.citations = static_cast<CitationCount>(parse_long(cell("citations"), "citations", rowno));
        out.push_back(std::move(rec));
    }
    return out;
}

Dataset derive_dataset(const std::vector<PaperRecord>& records, const std::string& home_country) {
    Dataset d;
    for (const auto& rec : records) {
        d.rows.push_back(Dataset::make_row(derive_predictors(rec, home_country), rec.citations));
    }
    return d;
}

} // namespace citree
