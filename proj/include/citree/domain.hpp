#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "citree/error.hpp"

namespace citree {

// ---------------------------------------------------------------------------
// Response side: citation counts, six levels, three classes.
// ---------------------------------------------------------------------------

using CitationCount = int; // >= 0

enum class ClassLabel : int { Low = 0, Median = 1, High = 2 };

constexpr int kNumClasses = 3;

const char* class_name(ClassLabel c);
ClassLabel class_from_name(const std::string& name);

// Citation -> level binning:
//   0 -> 0, 1 -> 1, 2-5 -> 2, 6-10 -> 3, 11-30 -> 4, >30 -> 5.
int level_of_citations(CitationCount c);

// Levels {0,1} -> Low, {2,3} -> Median, {4,5} -> High.
ClassLabel class_of_level(int level);

// ---------------------------------------------------------------------------
// Predictor side.
// ---------------------------------------------------------------------------

// The 8 combined subject categories.
enum class SubjectClass : int {
    LogicSetTheory = 0,
    Algebraic = 1,
    Geometric = 2,
    Analytic = 3,
    ProbabilityStatistics = 4,
    ComputerScience = 5,
    Applications = 6,
    Others = 7,
};

constexpr int kNumSubjects = 8;

const char* subject_name(SubjectClass s);
SubjectClass subject_from_name(const std::string& name);

struct AuthorRecord {
    int first_publication_year = 0;
    std::string country;
    std::string institute_id;
};

struct JournalStats {
    // Year maps cover 2004..2008.
    std::map<int, long> citations_by_year;   // c_i: citations appearing in 2009
    std::map<int, long> publications_by_year; // n_i
    long accumulated_citations_to_2009 = 0;  // cito2009
    bool is_book_or_thesis = false;
};

struct SubjectHistory {
    std::map<SubjectClass, long> counts_by_subject_2004_2008;
    long total_2004_2008 = 0;
};

struct PaperRecord {
    int publication_year = 0;
    std::vector<AuthorRecord> authors;
    int references = 0;
    int pages = 1;
    bool has_review_text = false;
    SubjectClass subject = SubjectClass::Others;
    JournalStats journal;
    SubjectHistory subject_history;
    CitationCount citations = 0;
};

// The 13 predictors, in the fixed schema order used everywhere (CSV columns,
// split search, output tables).
enum Predictor : int {
    kAut = 0,
    kRfstp,
    kAvacag,
    kInst,
    kNati,
    kJpper,
    kRef,
    kPg,
    kRt,
    kMsccla,
    kClaper,
    kMcq,
    kCito2009,
};

constexpr int kNumPredictors = 13;

enum class ColumnKind { Numeric, Categorical8, Binary };

struct ColumnSpec {
    std::string name;
    ColumnKind kind;
};

const std::array<ColumnSpec, kNumPredictors>& predictor_schema();
int predictor_index(const std::string& name); // -1 if unknown

struct PredictorVector {
    int aut = 1;
    double rfstp = 0.0;
    double avacag = 0.0;
    int inst = 1;
    int nati = 1;
    double jpper = 0.0;
    int ref = 0;
    int pg = 1;
    int rt = 0;
    SubjectClass msccla = SubjectClass::Others;
    double claper = 0.0;
    double mcq = 0.0;
    long cito2009 = 0;

    // Flat numeric view in schema order; msccla is its category index.
    std::array<double, kNumPredictors> to_array() const;
    static PredictorVector from_array(const std::array<double, kNumPredictors>& a);
};

struct AuthorBlock {
    int aut;
    double rfstp;
    double avacag;
    int inst;
    int nati;
    double jpper;
};

// aut, rfstp, avacag, inst, nati, jpper from the author list.
AuthorBlock derive_author_block(const std::vector<AuthorRecord>& authors, int pub_year,
                                const std::string& home_country);

// MCQ = sum(c_i) / sum(n_i) over 2004..2008; 0 for books/theses.
// Zero publications for a non-book journal is an error, not 0.
double compute_mcq(const JournalStats& j);

// Proportion of subject s among 2004..2008 publications.
double compute_claper(const SubjectHistory& h, SubjectClass s);

// Full record -> 13 predictors (home_country parameterizes jpper).
PredictorVector derive_predictors(const PaperRecord& rec, const std::string& home_country);

} // namespace citree
