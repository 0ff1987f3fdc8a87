#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bbv/theorems.hpp"

#include <map>
#include <set>

using namespace bbv;

TEST_CASE("registry covers every in-scope result") {
    // anchor -> checkers that verify it
    const std::map<std::string, std::vector<std::string>> anchors = {
        {"BB-Baer (1)", {"BB-Baer-1"}},
        {"BB-Baer (2)", {"BB-Baer-2"}},
        {"BB-Baer (3)", {"BB-Baer-3"}},
        {"BB-Baer (4)", {"BB-Baer-4"}},
        {"BB-Baer (5)", {"BB-Baer-5"}},
        {"3-space-meets-ruled", {"3-space-meets-ruled"}},
        {"lem:tc-brs", {"lem:tc-brs"}},
        {"ruled extension agreement", {"ruled-extension-agreement"}},
        {"cath-conic", {"cath-conic"}},
        {"part-sec-conic", {"part-sec-conic"}},
        {"res:circle", {"res:circle"}},
        {"lem:nrc-extn", {"lem:nrc-extn"}},
        {"lem:nrc-extn tightness", {"lem:nrc-extn-tight"}},
        {"lemma-3-Baer", {"lemma-3-Baer"}},
        {"thm:partition-intro", {"thm:partition-intro"}},
        {"cor:tgt-baby", {"cor:tgt-baby"}},
        {"thm:partition", {"thm:partition"}},
        {"section 3 theorem", {"sec3-regulus-special"}},
        {"thm:Baerline-trans", {"thm:Baerline-trans"}},
        {"cor:Baerplane-trans", {"cor:Baerplane-trans"}},
        {"adult-conic-g", {"adult-conic-g"}},
        {"cor:PcorrPsigma", {"cor:PcorrPsigma"}},
        {"thm:Ccapsi", {"thm:Ccapsi"}},
        {"adult-conic-T", {"adult-conic-T"}},
        {"adult-baby", {"adult-baby"}},
        {"lem:sect-conic", {"lem:sect-conic"}},
        {"lem:sect-conic converse", {"lem:sect-conic-conv"}},
        {"thm-tgt-conic-T-1", {"thm-tgt-conic-T-1"}},
        {"conv-tgt", {"conv-tgt"}},
        {"thm-tgt-conic-T-2", {"thm-tgt-conic-T-2"}},
        {"smiley-conic", {"smiley-conic"}},
        {"4nrc-is-baby-1", {"4nrc-is-baby-1"}},
        {"baby-not-T-part2", {"baby-not-T-part2"}},
    };
    for (const auto& [anchor, ids] : anchors)
        for (const std::string& id : ids) CHECK(is_registered(id));
    // and nothing is registered twice
    auto ids = registered_ids();
    std::set<std::string> uniq(ids.begin(), ids.end());
    CHECK(uniq.size() == ids.size());
    CHECK(ids.size() == 33);
}

TEST_CASE("unknown id is rejected") {
    FieldTower tw(3);
    Frame fr(tw);
    Mode mode;
    CHECK_THROWS_AS(run_check("no-such-theorem", fr, mode),
                    std::invalid_argument);
}

TEST_CASE("records are deterministic given (id, q, mode, seed)") {
    FieldTower tw(4);
    Frame fr(tw);
    Mode mode;
    mode.exhaustive = false;
    mode.samples = 40;
    mode.seed = 123;
    for (const std::string& id :
         {std::string("BB-Baer-1"), std::string("adult-conic-g"),
          std::string("thm:partition"), std::string("lem:sect-conic")}) {
        CheckRecord a = run_check(id, fr, mode);
        CheckRecord b = run_check(id, fr, mode);
        CHECK(a.status == b.status);
        CHECK(a.counts.dump() == b.counts.dump());
        CHECK(a.witnesses.dump() == b.witnesses.dump());
    }
    // a different seed changes the instances but not the verdict
    Mode other = mode;
    other.seed = 77;
    CheckRecord c = run_check("adult-conic-g", fr, other);
    CHECK(c.status == Status::pass);
}

TEST_CASE("hypothesis violations skip with a reason") {
    FieldTower tw(5);
    Frame fr(tw);
    Mode mode;
    CheckRecord r = run_check("smiley-conic", fr, mode);
    CHECK(r.status == Status::skip);
    CHECK(r.reason == "requires q>7");
    CheckRecord r2 = run_check("thm-tgt-conic-T-1", fr, mode);
    CHECK(r2.status == Status::skip);
    CHECK(r2.reason == "requires q>5");
    CheckRecord r3 = run_check("lem:nrc-extn-tight", fr, mode);
    CHECK(r3.status == Status::skip);
}

TEST_CASE("census checker reproduces the q=3 counts") {
    FieldTower tw(3);
    Frame fr(tw);
    Mode mode;
    mode.exhaustive = true;
    CheckRecord r = run_check("3-space-meets-ruled", fr, mode);
    REQUIRE(r.status == Status::pass);
    auto per = r.counts["per_surface"];
    CHECK(per[0] == 3);
    CHECK(per[1] == 4);
    CHECK(per[2] == 6);
    CHECK(per[3] == 36);
    CHECK(per[4] == 72);
}

TEST_CASE("the tight pair passes exactly at q=7") {
    FieldTower tw(7);
    Frame fr(tw);
    Mode mode;
    CheckRecord r = run_check("lem:nrc-extn-tight", fr, mode);
    CHECK(r.status == Status::pass);
    CHECK(r.counts["f_at_P_tau"] != 0);
}

TEST_CASE("full exhaustive sweep at q=3 has no failures") {
    FieldTower tw(3);
    Frame fr(tw);
    Mode mode;
    mode.exhaustive = true;
    mode.samples = 40;
    for (const std::string& id : registered_ids()) {
        CheckRecord r = run_check(id, fr, mode);
        INFO(id);
        CHECK(r.status != Status::fail);
    }
}
