#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "citree/domain.hpp"

using namespace citree;

TEST_CASE("citation level binning") {
    CHECK(level_of_citations(0) == 0);
    CHECK(level_of_citations(1) == 1);
    CHECK(level_of_citations(2) == 2);
    CHECK(level_of_citations(5) == 2);
    CHECK(level_of_citations(6) == 3);
    CHECK(level_of_citations(7) == 3);
    CHECK(level_of_citations(10) == 3);
    CHECK(level_of_citations(11) == 4);
    CHECK(level_of_citations(30) == 4);
    CHECK(level_of_citations(31) == 5);
    CHECK(level_of_citations(1000) == 5);
    CHECK_THROWS_AS(level_of_citations(-1), SchemaError);
}

TEST_CASE("level binning is monotone") {
    int prev = 0;
    for (int c = 0; c <= 200; ++c) {
        const int lvl = level_of_citations(c);
        CHECK(lvl >= prev);
        prev = lvl;
    }
}

TEST_CASE("level to class") {
    CHECK(class_of_level(0) == ClassLabel::Low);
    CHECK(class_of_level(1) == ClassLabel::Low);
    CHECK(class_of_level(2) == ClassLabel::Median);
    CHECK(class_of_level(3) == ClassLabel::Median);
    CHECK(class_of_level(4) == ClassLabel::High);
    CHECK(class_of_level(5) == ClassLabel::High);
    CHECK_THROWS_AS(class_of_level(6), SchemaError);

    // class of citations is monotone too
    ClassLabel prev = ClassLabel::Low;
    for (int c = 0; c <= 200; ++c) {
        const ClassLabel cls = class_of_level(level_of_citations(c));
        CHECK(static_cast<int>(cls) >= static_cast<int>(prev));
        prev = cls;
    }
}

TEST_CASE("author block: single new home author") {
    const auto b = derive_author_block({{2009, "JP", "i1"}}, 2009, "JP");
    CHECK(b.aut == 1);
    CHECK(b.rfstp == 1.0);
    CHECK(b.avacag == 0.0);
    CHECK(b.inst == 1);
    CHECK(b.nati == 1);
    CHECK(b.jpper == 1.0);
}

TEST_CASE("author block: shared institute, mixed countries") {
    const auto b = derive_author_block({{1999, "JP", "i1"}, {2009, "FR", "i1"}}, 2009, "JP");
    CHECK(b.aut == 2);
    CHECK(b.rfstp == doctest::Approx(0.5));
    CHECK(b.avacag == doctest::Approx(5.0));
    CHECK(b.inst == 1);
    CHECK(b.nati == 2);
    CHECK(b.jpper == doctest::Approx(0.5));
}

TEST_CASE("author block: three foreign institutes, one country") {
    const auto b = derive_author_block(
        {{2004, "DE", "a"}, {2004, "DE", "b"}, {2004, "DE", "c"}}, 2009, "JP");
    CHECK(b.aut == 3);
    CHECK(b.rfstp == 0.0);
    CHECK(b.avacag == doctest::Approx(5.0));
    CHECK(b.inst == 3);
    CHECK(b.nati == 1);
    CHECK(b.jpper == 0.0);
}

TEST_CASE("author block errors and invariants") {
    CHECK_THROWS_AS(derive_author_block({}, 2009, "JP"), SchemaError);
    CHECK_THROWS_AS(derive_author_block({{2010, "JP", "i"}}, 2009, "JP"), SchemaError);

    // nati <= inst <= aut; fractions in range; avacag = 0 iff rfstp = 1.
    const std::vector<std::vector<AuthorRecord>> cases = {
        {{2009, "JP", "x"}, {2009, "JP", "x"}},
        {{2000, "JP", "x"}, {2005, "US", "y"}, {2009, "US", "y"}},
        {{1990, "FR", "a"}, {1990, "FR", "b"}, {1990, "DE", "c"}, {2009, "JP", "d"}},
    };
    for (const auto& authors : cases) {
        const auto b = derive_author_block(authors, 2009, "JP");
        CHECK(b.nati <= b.inst);
        CHECK(b.inst <= b.aut);
        CHECK(b.rfstp >= 0.0);
        CHECK(b.rfstp <= 1.0);
        CHECK(b.jpper >= 0.0);
        CHECK(b.jpper <= 1.0);
        CHECK(b.avacag >= 0.0);
        CHECK((b.avacag == 0.0) == (b.rfstp == 1.0));
        // rfstp*aut and jpper*aut are integral
        CHECK(std::abs(b.rfstp * b.aut - std::round(b.rfstp * b.aut)) < 1e-9);
        CHECK(std::abs(b.jpper * b.aut - std::round(b.jpper * b.aut)) < 1e-9);
    }
}

namespace {
JournalStats make_journal(std::array<long, 5> c, std::array<long, 5> n, bool book = false) {
    JournalStats j;
    for (int i = 0; i < 5; ++i) {
        j.citations_by_year[2004 + i] = c[static_cast<std::size_t>(i)];
        j.publications_by_year[2004 + i] = n[static_cast<std::size_t>(i)];
    }
    j.is_book_or_thesis = book;
    return j;
}
} // namespace

TEST_CASE("mcq") {
    CHECK(compute_mcq(make_journal({1, 1, 1, 1, 1}, {2, 2, 2, 2, 2})) == doctest::Approx(0.5));
    CHECK(compute_mcq(make_journal({0, 0, 0, 0, 0}, {5, 5, 5, 5, 5})) == 0.0);
    CHECK(compute_mcq(make_journal({9, 9, 9, 9, 9}, {0, 0, 0, 0, 0}, true)) == 0.0);
    CHECK_THROWS_AS(compute_mcq(make_journal({0, 0, 0, 0, 0}, {0, 0, 0, 0, 0})), NumericError);

    JournalStats incomplete;
    incomplete.citations_by_year[2004] = 1;
    incomplete.publications_by_year[2004] = 1;
    CHECK_THROWS_AS(compute_mcq(incomplete), SchemaError);
}

TEST_CASE("mcq is scale invariant") {
    const auto base = make_journal({3, 1, 4, 1, 5}, {2, 7, 1, 8, 2});
    const auto scaled = make_journal({9, 3, 12, 3, 15}, {6, 21, 3, 24, 6});
    CHECK(compute_mcq(base) == doctest::Approx(compute_mcq(scaled)).epsilon(1e-12));
}

TEST_CASE("claper") {
    SubjectHistory h;
    h.counts_by_subject_2004_2008[SubjectClass::Analytic] = 30;
    h.counts_by_subject_2004_2008[SubjectClass::Algebraic] = 70;
    h.total_2004_2008 = 100;
    CHECK(compute_claper(h, SubjectClass::Analytic) == doctest::Approx(0.3));
    CHECK(compute_claper(h, SubjectClass::Geometric) == 0.0); // absent subject

    SubjectHistory single;
    single.counts_by_subject_2004_2008[SubjectClass::Others] = 12;
    single.total_2004_2008 = 12;
    CHECK(compute_claper(single, SubjectClass::Others) == 1.0);

    SubjectHistory empty;
    CHECK_THROWS_AS(compute_claper(empty, SubjectClass::Others), NumericError);

    // scale invariance
    SubjectHistory scaled;
    scaled.counts_by_subject_2004_2008[SubjectClass::Analytic] = 90;
    scaled.counts_by_subject_2004_2008[SubjectClass::Algebraic] = 210;
    scaled.total_2004_2008 = 300;
    CHECK(compute_claper(scaled, SubjectClass::Analytic) ==
          doctest::Approx(compute_claper(h, SubjectClass::Analytic)).epsilon(1e-12));
}

TEST_CASE("derive_predictors wires the formulas together") {
    PaperRecord rec;
    rec.publication_year = 2009;
    rec.authors = {{1999, "JP", "i1"}, {2009, "FR", "i2"}};
    rec.references = 17;
    rec.pages = 23;
    rec.has_review_text = true;
    rec.subject = SubjectClass::ProbabilityStatistics;
    rec.journal = make_journal({1, 1, 1, 1, 1}, {2, 2, 2, 2, 2});
    rec.journal.accumulated_citations_to_2009 = 340;
    rec.subject_history.counts_by_subject_2004_2008[SubjectClass::ProbabilityStatistics] = 25;
    rec.subject_history.total_2004_2008 = 100;
    rec.citations = 7;

    const auto v = derive_predictors(rec, "JP");
    CHECK(v.aut == 2);
    CHECK(v.avacag == doctest::Approx(5.0));
    CHECK(v.jpper == doctest::Approx(0.5));
    CHECK(v.ref == 17);
    CHECK(v.pg == 23);
    CHECK(v.rt == 1);
    CHECK(v.claper == doctest::Approx(0.25));
    CHECK(v.mcq == doctest::Approx(0.5));
    CHECK(v.cito2009 == 340);

    // book journal zeroes both journal predictors
    rec.journal.is_book_or_thesis = true;
    const auto vb = derive_predictors(rec, "JP");
    CHECK(vb.mcq == 0.0);
    CHECK(vb.cito2009 == 0);
}

TEST_CASE("predictor vector array round trip") {
    PredictorVector v;
    v.aut = 3;
    v.rfstp = 1.0 / 3;
    v.avacag = 7.5;
    v.inst = 2;
    v.nati = 2;
    v.jpper = 2.0 / 3;
    v.ref = 40;
    v.pg = 12;
    v.rt = 1;
    v.msccla = SubjectClass::Geometric;
    v.claper = 0.11;
    v.mcq = 1.25;
    v.cito2009 = 901;
    const auto w = PredictorVector::from_array(v.to_array());
    CHECK(w.to_array() == v.to_array());
    CHECK(w.msccla == SubjectClass::Geometric);
}
