// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <cstring>
#include <string>
#include <thread>

#include "doctest.h"
#include "ivmap/ivmap.h"
#include "json.hpp"

namespace {

struct MapHandle {
  ivm_map* m = nullptr;
  ~MapHandle() { ivm_map_free(m); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  ivm_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::strlen(ivm_version()) > 0);
  CHECK(std::string(ivm_status_name(IVM_OK)) == "Ok");
  CHECK(std::string(ivm_status_name(IVM_E_PARSE)) == "ParseError");
  CHECK(std::string(ivm_status_name(IVM_E_NULL_ARG)) == "NullArgument");
}

TEST_CASE("logistic evaluation through the C API") {
  MapHandle h;
  REQUIRE(ivm_zoo_logistic(4.0, &h.m) == IVM_OK);
  double y = 0;
  CHECK(ivm_map_eval(h.m, 0.25, &y) == IVM_OK);
  CHECK(y == 0.75);
  CHECK(ivm_map_schwarzian(h.m, 0.0, &y) == IVM_OK);
  CHECK(y == -6.0);
  CHECK(ivm_map_eval(h.m, 0.5, &y) == IVM_E_EXCEPTIONAL_POINT);
  CHECK(std::string(ivm_last_error()).find("ExceptionalPoint") != std::string::npos);
  double ex[4];
  size_t n = 0;
  CHECK(ivm_map_exceptional(h.m, ex, 4, &n) == IVM_OK);
  CHECK(n == 1);
  CHECK(ex[0] == 0.5);
}

TEST_CASE("null arguments are rejected") {
  double y;
  CHECK(ivm_map_eval(nullptr, 0.2, &y) == IVM_E_NULL_ARG);
  MapHandle h;
  REQUIRE(ivm_zoo_logistic(4.0, &h.m) == IVM_OK);
  CHECK(ivm_map_eval(h.m, 0.2, nullptr) == IVM_E_NULL_ARG);
  CHECK(ivm_map_from_json(nullptr, &h.m) == IVM_E_NULL_ARG);
  ivm_map_free(nullptr);
  ivm_string_free(nullptr);
}

TEST_CASE("parse errors and JSON round trip") {
  ivm_map* m = nullptr;
  CHECK(ivm_map_from_json("{ nope", &m) == IVM_E_PARSE);
  CHECK(m == nullptr);
  MapHandle h;
  REQUIRE(ivm_zoo_lorenz(0.5, 2.0, 2.0, 0.9, 0.1, &h.m) == IVM_OK);
  char* text = nullptr;
  REQUIRE(ivm_map_to_json(h.m, &text) == IVM_OK);
  const std::string once = take(text);
  MapHandle back;
  REQUIRE(ivm_map_from_json(once.c_str(), &back.m) == IVM_OK);
  REQUIRE(ivm_map_to_json(back.m, &text) == IVM_OK);
  CHECK(take(text) == once);
}

TEST_CASE("lateral orbit CSV") {
  MapHandle h;
  REQUIRE(ivm_zoo_logistic(4.0, &h.m) == IVM_OK);
  double c;
  int s;
  CHECK(ivm_lateral_step(h.m, 0.5, IVM_SIDE_MINUS, &c, &s) == IVM_OK);
  CHECK(c == 1.0);
  CHECK(s == IVM_SIDE_MINUS);
  CHECK(ivm_lateral_step(h.m, 0.5, 3, &c, &s) == IVM_E_BAD_PARAM);
  char* csv = nullptr;
  REQUIRE(ivm_orbit_csv(h.m, 0.5, IVM_SIDE_MINUS, 2, &csv) == IVM_OK);
  const std::string t = take(csv);
  CHECK(t.rfind("step,coord,side,branch_index\n", 0) == 0);
  CHECK(t.find("\n1,1,-,") != std::string::npos);
  CHECK(t.find("\n2,0,+,") != std::string::npos);
  CHECK(ivm_orbit_csv(h.m, 0.5, 0, 2, &csv) == IVM_E_PARTIAL_ORBIT);
}

TEST_CASE("surgery and classification through the C API") {
  MapHandle f, g;
  REQUIRE(ivm_zoo_logistic(4.0, &f.m) == IVM_OK);
  char* rec = nullptr;
  REQUIRE(ivm_surgery_pit(f.m, 0.3, 0.5, 0.4, &g.m, &rec) == IVM_OK);
  const auto j = nlohmann::json::parse(take(rec));
  CHECK(j.at("factors").at(0).get<double>() == 0.125);

  MapHandle l;
  REQUIRE(ivm_zoo_logistic(3.2, &l.m) == IVM_OK);
  ivm_sampling s;
  ivm_sampling_default(&s);
  s.samples = 40;
  s.burn_in = 2000;
  s.tail = 5000;
  s.seed = 3;
  s.threads = 1;
  s.closure_steps = 5000;
  char* out = nullptr;
  REQUIRE(ivm_classify(l.m, &s, &out) == IVM_OK);
  const auto r = nlohmann::json::parse(take(out));
  REQUIRE(r.at("attractors").size() == 1);
  CHECK(r["attractors"][0]["period"] == 2);

  double frac = 0;
  CHECK(ivm_mane(l.m, 1e-3, &s, &frac) == IVM_E_PRECONDITION_FAILED);
}

TEST_CASE("last error is per thread") {
  double y;
  CHECK(ivm_map_eval(nullptr, 0.2, &y) == IVM_E_NULL_ARG);
  const std::string here = ivm_last_error();
  std::string there;
  std::thread([&] {
    MapHandle h;
    ivm_zoo_logistic(4.0, &h.m);
    ivm_map_eval(h.m, 0.5, &y);
    there = ivm_last_error();
  }).join();
  CHECK(std::string(ivm_last_error()) == here);
  CHECK(there != here);
}
