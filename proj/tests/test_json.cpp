#include <doctest.h>

#include "foundry/json_io.hpp"

using namespace foundry;

TEST_CASE("pasture json round trip is bit-exact") {
  for (const std::string name : {"U", "D", "H", "V", "K2", "F4"}) {
    Pasture p = named_pasture(name);
    Json j = pasture_to_json(p);
    std::string s1 = dump_json(j);
    Pasture q = pasture_from_json(Json::parse(s1));
    std::string s2 = dump_json(pasture_to_json(q));
    CHECK(s1 == s2);
    CHECK(p.numerical_type() == q.numerical_type());
  }
}

TEST_CASE("matroid json round trip") {
  for (const std::string name : {"U(2,4)", "F7", "T8", "Q6"}) {
    Matroid m = named_matroid(name);
    Json j = matroid_to_json(m);
    std::string s1 = dump_json(j);
    Matroid back = matroid_from_json(Json::parse(s1));
    CHECK(back == m);
    CHECK(dump_json(matroid_to_json(back)) == s1);
  }
}

TEST_CASE("matroid json accepts circuits and nonbases") {
  Json j;
  j["format"] = "matroid/v1";
  j["n"] = 6;
  j["rank"] = 3;
  j["circuits"] = Json::array({Json::array({0, 3, 4}), Json::array({0, 1, 2})});
  Matroid q6 = matroid_from_json(j);
  CHECK(is_isomorphic(q6, named_matroid("Q6")).has_value());

  Json j2;
  j2["format"] = "matroid/v1";
  j2["n"] = 5;
  j2["rank"] = 3;
  j2["nonbases"] = Json::array({Json::array({0, 1, 2})});
  CHECK(matroid_from_json(j2) == named_matroid("C5"));

  Json bad = j2;
  bad["bases"] = Json::array();
  CHECK_THROWS_AS(matroid_from_json(bad), ParseError);
}

TEST_CASE("diagram json drives the colimit") {
  Budget budget;
  Json j;
  j["format"] = "diagram/v1";
  j["nodes"] = Json::array({"H", "H"});
  Json id_images, conj_images;
  id_images["z"] = Json{{"sign", 1}, {"exps", {{"z", 1}}}};
  conj_images["z"] = Json{{"sign", 1}, {"exps", {{"z", -1}}}};
  j["edges"] = Json::array({Json{{"from", 0}, {"to", 1}, {"images", id_images}},
                            Json{{"from", 0}, {"to", 1}, {"images", conj_images}}});
  Diagram d = diagram_from_json(j);
  ColimitResult c = colimit(d);
  CHECK(find_isomorphism(c.pasture, named_pasture("F3"), budget).has_value());
}

TEST_CASE("report json") {
  FoundationOptions opts;
  opts.identify = true;
  FoundationReport rep = foundation(named_matroid("U(2,4)"), opts);
  Json j = report_to_json(rep);
  CHECK(j["numerical_type"]["free_rank"] == 2);
  CHECK(j["numerical_type"]["hexagon_count"] == 1);
  CHECK(j["identification"]["name"] == "U");
  CHECK(j["dictionary"].size() == 6);
}
