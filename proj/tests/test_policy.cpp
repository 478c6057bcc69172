// Copyright 2026 The secxml Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "fixtures.hpp"
#include "secxml/error.hpp"
#include "secxml/policy.hpp"
#include "secxml/xml_io.hpp"
#include "workload.hpp"

using namespace secxml;
using namespace secxml::testing;

namespace {

UpdateType ut(UpdateKind kind, std::string type, std::string source = {}) {
  return UpdateType{kind, std::move(type), std::move(source)};
}

UpdateSpec policy(std::string_view name) { return parse_policy(read_fixture(name), hospital_dtd()); }

NodeId margaret_folder(const XmlTree& doc) {
  return child_labelled(doc, patient_named(doc, "Margaret"), "medicalFolder");
}

std::shared_ptr<const Dtd> small_dtd() {
  static const auto dtd = std::make_shared<const Dtd>(parse_dtd("root r; r -> a*; a -> (a | b)*; b -> EPSILON;"));
  return dtd;
}

}  // namespace

TEST_CASE("parse_policy reads annotations") {
  UpdateSpec spec = policy("example1.policy");
  CHECK(spec.size() == 3);
  UpdateType del = ut(UpdateKind::Delete, "treatment");
  CHECK(spec.of_type(del).size() == 3);
  REQUIRE(spec.find("analysis", del));
  CHECK(spec.find("analysis", del)->kind() == AnnotationValue::Kind::Deny);
  CHECK(spec.update_types() == std::vector<UpdateType>{del});

  UpdateSpec two = policy("example2.policy");
  const AnnotationValue* dept = two.find("dept", ut(UpdateKind::InsertInto, "treatment"));
  REQUIRE(dept);
  CHECK(dept->kind() == AnnotationValue::Kind::ConditionalClosed);
  CHECK(*dept->condition() == parse_qualifier("child::dname/text()='cardiology'"));
}

TEST_CASE("parse_policy accepts an empty file") {
  UpdateSpec spec = parse_policy("# nothing\n\n", hospital_dtd());
  CHECK(spec.size() == 0);
}

TEST_CASE("parse_policy errors") {
  auto dtd = hospital_dtd();
  CHECK_THROWS_AS(parse_policy("annot ward delete[result] = Y", dtd), SchemaError);
  CHECK_THROWS_AS(parse_policy("annot dept remove[result] = Y", dtd), ParseError);
  CHECK_THROWS_AS(parse_policy("annot dept delete[result] = Y\nannot dept delete[result] = N", dtd), SchemaError);
  CHECK_THROWS_AS(parse_policy("annot dept delete[result] = [ancestor::hospital]", dtd), FragmentError);
  CHECK_THROWS_AS(parse_policy("annot dept delete[result] = maybe", dtd), ParseError);
  CHECK_THROWS_AS(parse_policy("annot dept replace[result] = Y", dtd), ParseError);
  CHECK_THROWS_AS(parse_policy("annot dept delete[result] = [child::ward]", dtd), SchemaError);
  CHECK_NOTHROW(parse_policy("annot treatment replace[result,result] = Nh", dtd));
}

TEST_CASE("oracle_updatable follows overriding along the folder") {
  XmlTree doc = hospital_doc();
  UpdateSpec spec = policy("example1.policy");
  UpdateType del = ut(UpdateKind::Delete, "treatment");
  CHECK(oracle_updatable(spec, doc, margaret_folder(doc), del));
  CHECK_FALSE(oracle_updatable(spec, doc, nth(doc, "analysis", 1), del));
  CHECK(oracle_updatable(spec, doc, nth(doc, "diagnosis", 1), del));
  CHECK_FALSE(oracle_updatable(spec, doc, nth(doc, "treatment", 2), del));
  CHECK_FALSE(oracle_updatable(spec, doc, doc.root(), del));

  Qualifier u = build_updatability(spec, del);
  Evaluator ev(doc);
  for (NodeId n : doc.preorder()) {
    if (!doc.is_text(n)) CHECK(ev.holds(u, n) == oracle_updatable(spec, doc, n, del));
  }
}

TEST_CASE("downward-closed denial blocks everything below") {
  XmlTree doc = hospital_doc();
  UpdateSpec spec = policy("example2.policy");
  UpdateType into = ut(UpdateKind::InsertInto, "treatment");
  CHECK(oracle_updatable(spec, doc, margaret_folder(doc), into));
  NodeId lucy = patient_named(doc, "Lucy");
  for (NodeId n : doc.preorder(lucy)) {
    if (!doc.is_text(n)) CHECK_FALSE(oracle_updatable(spec, doc, n, into));
  }
  // Emma is category A but her department fails the closed condition.
  CHECK_FALSE(oracle_updatable(spec, doc, patient_named(doc, "Emma"), into));
  Qualifier u = build_updatability(spec, into);
  Evaluator ev(doc);
  for (NodeId n : doc.preorder()) {
    if (!doc.is_text(n)) CHECK(ev.holds(u, n) == oracle_updatable(spec, doc, n, into));
  }
}

TEST_CASE("empty specification denies by default") {
  XmlTree doc = hospital_doc();
  UpdateSpec spec(hospital_dtd());
  UpdateType del = ut(UpdateKind::Delete, "result");
  CHECK(build_updatability(spec, del).is_never());
  CHECK(build_forbidden(spec, del).is_never());
  CHECK(build_crp(spec, "result").is_never());
  for (NodeId n : doc.preorder()) {
    if (!doc.is_text(n)) CHECK_FALSE(oracle_updatable(spec, doc, n, del));
  }
}

TEST_CASE("single Y annotation compiles to the minimal shape") {
  UpdateSpec spec(hospital_dtd());
  UpdateType del = ut(UpdateKind::Delete, "result");
  spec.add("treatment", del, AnnotationValue::allow());
  Updatability parts = build_updatability_parts(spec, del);
  CHECK(parts.nearest ==
        parse_qualifier("ancestor-or-self::*[self::treatment][1][self::treatment]"));
  CHECK_FALSE(parts.closure.has_value());
  CHECK(parts.combined() == parts.nearest);
}

TEST_CASE("explicit prohibition") {
  XmlTree doc = hospital_doc();
  UpdateSpec spec = policy("example3.policy");
  UpdateType into = ut(UpdateKind::InsertInto, "result");
  NodeId t3 = nth(doc, "treatment", 3);
  CHECK(oracle_forbidden(spec, doc, t3, into));
  CHECK_FALSE(oracle_forbidden(spec, doc, margaret_folder(doc), into));
  CHECK_FALSE(oracle_forbidden(spec, doc, nth(doc, "treatment", 4), into));
  // No annotation at all above: neither allowed nor explicitly forbidden.
  CHECK_FALSE(oracle_forbidden(spec, doc, doc.root(), into));
  Qualifier f = build_forbidden(spec, into);
  Evaluator ev(doc);
  for (NodeId n : doc.preorder()) {
    if (!doc.is_text(n)) CHECK(ev.holds(f, n) == oracle_forbidden(spec, doc, n, into));
  }
}

TEST_CASE("conflict resolution predicate") {
  auto dtd = small_dtd();
  XmlTree t = parse_xml("<r><a><b/></a><a/></r>");
  NodeId a1 = t.children(t.root())[0];
  NodeId a2 = t.children(t.root())[1];
  NodeId b = t.children(a1)[0];

  SUBCASE("no positional annotations") {
    UpdateSpec spec(dtd);
    spec.add("a", ut(UpdateKind::InsertInto, "b"), AnnotationValue::allow());
    CHECK(build_crp(spec, "b").is_never());
  }
  SUBCASE("insertAsFirst denial") {
    UpdateSpec spec(dtd);
    spec.add("a", ut(UpdateKind::InsertAsFirst, "b"), AnnotationValue::deny());
    Qualifier crp = build_crp(spec, "b");
    CHECK_FALSE(eval_qualifier(crp, t, t.root()));
    CHECK(eval_qualifier(crp, t, a1));
    CHECK(eval_qualifier(crp, t, a2));
    CHECK(eval_qualifier(crp, t, b));
  }
  SUBCASE("insertBefore denial is seen from the parent") {
    UpdateSpec spec(dtd);
    spec.add("a", ut(UpdateKind::InsertBefore, "b"), AnnotationValue::deny());
    Qualifier crp = build_crp(spec, "b");
    CHECK(eval_qualifier(crp, t, t.root()));
    CHECK(eval_qualifier(crp, t, a1));
    CHECK_FALSE(eval_qualifier(crp, t, a2));
    CHECK_FALSE(eval_qualifier(crp, t, b));
  }
}

TEST_CASE("updatability size stays linear in the annotation count") {
  for (std::size_t n : {10u, 100u, 1000u}) {
    UpdateSpec chain = chain_policy(n);
    for (const UpdateType& t : chain.update_types()) {
      CHECK(node_count(build_updatability(chain, t)) <= 24 * (chain.of_type(t).size() + 1));
    }
    // Every annotation on one update type.
    UpdateSpec shared(chain.dtd_ptr());
    UpdateType del = ut(UpdateKind::Delete, chain_type(0));
    for (const auto& a : chain.annotations()) shared.add(a.element, del, a.value);
    CHECK(node_count(build_updatability(shared, del)) <= 24 * (n + 1));
  }
}
