#include "citree/domain.hpp"

#include <algorithm>
#include <set>

namespace citree {

const char* class_name(ClassLabel c) {
    switch (c) {
        case ClassLabel::Low: return "low";
        case ClassLabel::Median: return "median";
        case ClassLabel::High: return "high";
    }
    return "?";
}

ClassLabel class_from_name(const std::string& name) {
    if (name == "low") return ClassLabel::Low;
    if (name == "median") return ClassLabel::Median;
    if (name == "high") return ClassLabel::High;
    throw SchemaError("unknown class label: '" + name + "'");
}

int level_of_citations(CitationCount c) {
    if (c < 0) throw SchemaError("negative citation count");
    if (c == 0) return 0;
    if (c == 1) return 1;
    if (c <= 5) return 2;
    if (c <= 10) return 3;
    if (c <= 30) return 4;
    return 5;
}

ClassLabel class_of_level(int level) {
    if (level < 0 || level > 5) throw SchemaError("level out of range 0..5");
    if (level <= 1) return ClassLabel::Low;
    if (level <= 3) return ClassLabel::Median;
    return ClassLabel::High;
}

namespace {
const char* kSubjectNames[kNumSubjects] = {
    "logic",       // logic / set theory
    "algebraic",   "geometric", "analytic",
    "probstat",    // probability / statistics
    "csinfo",      // computer science / information theory
    "applications", "others",
};
} // namespace

const char* subject_name(SubjectClass s) { return kSubjectNames[static_cast<int>(s)]; }

SubjectClass subject_from_name(const std::string& name) {
    for (int i = 0; i < kNumSubjects; ++i) {
        if (name == kSubjectNames[i]) return static_cast<SubjectClass>(i);
    }
    throw SchemaError("unknown subject token: '" + name + "'");
}

const std::array<ColumnSpec, kNumPredictors>& predictor_schema() {
    static const std::array<ColumnSpec, kNumPredictors> schema = {{
        {"aut", ColumnKind::Numeric},
        {"rfstp", ColumnKind::Numeric},
        {"avacag", ColumnKind::Numeric},
        {"inst", ColumnKind::Numeric},
        {"nati", ColumnKind::Numeric},
        {"jpper", ColumnKind::Numeric},
        {"ref", ColumnKind::Numeric},
        {"pg", ColumnKind::Numeric},
        {"rt", ColumnKind::Binary},
        {"msccla", ColumnKind::Categorical8},
        {"claper", ColumnKind::Numeric},
        {"mcq", ColumnKind::Numeric},
        {"cito2009", ColumnKind::Numeric},
    }};
    return schema;
}

int predictor_index(const std::string& name) {
    const auto& schema = predictor_schema();
    for (int i = 0; i < kNumPredictors; ++i) {
        if (schema[i].name == name) return i;
    }
    return -1;
}

std::array<double, kNumPredictors> PredictorVector::to_array() const {
    return {static_cast<double>(aut),
            rfstp,
            avacag,
            static_cast<double>(inst),
            static_cast<double>(nati),
            jpper,
            static_cast<double>(ref),
            static_cast<double>(pg),
            static_cast<double>(rt),
            static_cast<double>(static_cast<int>(msccla)),
            claper,
            mcq,
            static_cast<double>(cito2009)};
}

PredictorVector PredictorVector::from_array(const std::array<double, kNumPredictors>& a) {
    PredictorVector v;
    v.aut = static_cast<int>(a[kAut]);
    v.rfstp = a[kRfstp];
    v.avacag = a[kAvacag];
    v.inst = static_cast<int>(a[kInst]);
    v.nati = static_cast<int>(a[kNati]);
    v.jpper = a[kJpper];
    v.ref = static_cast<int>(a[kRef]);
    v.pg = static_cast<int>(a[kPg]);
    v.rt = static_cast<int>(a[kRt]);
    v.msccla = static_cast<SubjectClass>(static_cast<int>(a[kMsccla]));
    v.claper = a[kClaper];
    v.mcq = a[kMcq];
    v.cito2009 = static_cast<long>(a[kCito2009]);
    return v;
}

AuthorBlock derive_author_block(const std::vector<AuthorRecord>& authors, int pub_year,
                                const std::string& home_country) {
    if (authors.empty()) throw SchemaError("malformed record: empty author list");
    const int n = static_cast<int>(authors.size());
    int first_timers = 0;
    long age_sum = 0;
    int home = 0;
    std::set<std::string> institutes;
    std::set<std::string> countries;
    for (const auto& a : authors) {
        if (a.first_publication_year > pub_year) {
            throw SchemaError("malformed record: first publication year after paper year");
        }
        if (a.first_publication_year == pub_year) ++first_timers;
        age_sum += pub_year - a.first_publication_year;
        if (a.country == home_country) ++home;
        institutes.insert(a.institute_id);
        countries.insert(a.country);
    }
    return AuthorBlock{n,
                       static_cast<double>(first_timers) / n,
                       static_cast<double>(age_sum) / n,
                       static_cast<int>(institutes.size()),
                       static_cast<int>(countries.size()),
                       static_cast<double>(home) / n};
}

double compute_mcq(const JournalStats& j) {
    if (j.is_book_or_thesis) return 0.0;
    long c_sum = 0, n_sum = 0;
    for (int year = 2004; year <= 2008; ++year) {
        auto ci = j.citations_by_year.find(year);
        auto ni = j.publications_by_year.find(year);
        if (ci == j.citations_by_year.end() || ni == j.publications_by_year.end()) {
            throw SchemaError("journal stats must cover 2004..2008");
        }
        c_sum += ci->second;
        n_sum += ni->second;
    }
    if (n_sum == 0) {
        throw NumericError("mcq undefined: journal has no 2004-2008 publications");
    }
    return static_cast<double>(c_sum) / static_cast<double>(n_sum);
}

double compute_claper(const SubjectHistory& h, SubjectClass s) {
    if (h.total_2004_2008 <= 0) {
        throw NumericError("claper undefined: empty subject history");
    }
    auto it = h.counts_by_subject_2004_2008.find(s);
    const long count = it == h.counts_by_subject_2004_2008.end() ? 0 : it->second;
    return static_cast<double>(count) / static_cast<double>(h.total_2004_2008);
}

PredictorVector derive_predictors(const PaperRecord& rec, const std::string& home_country) {
    const AuthorBlock ab = derive_author_block(rec.authors, rec.publication_year, home_country);
    PredictorVector v;
    v.aut = ab.aut;
    v.rfstp = ab.rfstp;
    v.avacag = ab.avacag;
    v.inst = ab.inst;
    v.nati = ab.nati;
    v.jpper = ab.jpper;
    v.ref = rec.references;
    v.pg = rec.pages;
    v.rt = rec.has_review_text ? 1 : 0;
    v.msccla = rec.subject;
    v.claper = compute_claper(rec.subject_history, rec.subject);
    v.mcq = compute_mcq(rec.journal);
    v.cito2009 = rec.journal.is_book_or_thesis ? 0 : rec.journal.accumulated_citations_to_2009;
    return v;
}

} // namespace citree
