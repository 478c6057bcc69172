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
#include "secxml/rewriter.hpp"
#include "secxml/xml_io.hpp"

using namespace secxml;
using namespace secxml::testing;

namespace {

UpdateSpec policy_text(std::string_view text) { return parse_policy(text, hospital_dtd()); }

ApplyResult run(const UpdateSpec& spec, const XmlTree& doc, std::string_view op) {
  return apply_update(*hospital_dtd(), doc, rewrite_update(spec, parse_update(op)));
}

}  // namespace

TEST_CASE("parse_update forms") {
  UpdateOp del = parse_update("delete descendant::treatment");
  CHECK(del.kind == UpdateKind::Delete);
  CHECK(del.source.empty());
  CHECK(del.target == parse_xpath("descendant::treatment"));

  UpdateOp ins = parse_update(read_fixture("example3.op"));
  CHECK(ins.kind == UpdateKind::InsertInto);
  CHECK(ins.source_type == "result");
  REQUIRE(ins.source.size() == 1);
  CHECK(ins.target == parse_xpath("descendant::treatment[child::descp/text()='biotherapy']"));

  CHECK(parse_update("insert <a/> as first into self::*").kind == UpdateKind::InsertAsFirst);
  CHECK(parse_update("insert <a/> as last into self::*").kind == UpdateKind::InsertAsLast);
  CHECK(parse_update("insert <a/><a>x</a> before child::b").kind == UpdateKind::InsertBefore);
  CHECK(parse_update("insert <a/> after child::b").kind == UpdateKind::InsertAfter);
  UpdateOp rep = parse_update("replace child::b[child::c/text()='with'] with <b/>");
  CHECK(rep.kind == UpdateKind::Replace);
  CHECK(rep.target == parse_xpath("child::b[child::c/text()='with']"));
  CHECK(rep.source_type == "b");
}

TEST_CASE("parse_update errors") {
  CHECK_THROWS_AS(parse_update("insert <a/><b/> into self::*"), ParseError);
  CHECK_THROWS_AS(parse_update("delete ancestor::a"), FragmentError);
  CHECK_THROWS_AS(parse_update("delete"), ParseError);
  CHECK_THROWS_AS(parse_update("insert into self::*"), ParseError);
  CHECK_THROWS_AS(parse_update("insert <a/> beside self::*"), ParseError);
  CHECK_THROWS_AS(parse_update("rename self::* to b"), ParseError);
}

TEST_CASE("operations print back to parseable text") {
  for (std::string_view text : {"delete descendant::treatment", "insert <a><b>x</b></a> as first into self::*",
                                "replace child::b with <b/><b/>", "insert <a/> after child::b | child::c"}) {
    UpdateOp op = parse_update(text);
    UpdateOp again = parse_update(to_string(op));
    CHECK(again.kind == op.kind);
    CHECK(again.target == op.target);
    CHECK(to_string(again) == to_string(op));
  }
}

TEST_CASE("append_qualifier attaches to the last step") {
  Qualifier q = parse_qualifier("child::x");
  CHECK(append_qualifier(parse_xpath("child::a/child::b"), q) == parse_xpath("child::a/child::b[child::x]"));
  CHECK(append_qualifier(parse_xpath("child::a[child::y]"), q) == parse_xpath("child::a[child::y][child::x]"));
  CHECK(append_qualifier(parse_xpath("child::a | child::b"), q) == parse_xpath("(child::a | child::b)[child::x]"));
}

TEST_CASE("delete guard has one disjunct per annotated type") {
  UpdateSpec spec = parse_policy(read_fixture("example5.policy"), hospital_dtd());
  UpdateOp op = parse_update(read_fixture("example5.op"));
  RewrittenOp r = rewrite_update(spec, op);
  Qualifier u = build_updatability(spec, UpdateType{UpdateKind::Delete, "result", {}});
  Qualifier expected = Qualifier::path(
      XPathExpr::step(Axis::Self, "result", {Qualifier::path(XPathExpr::step(Axis::Parent, "*", {u}))}));
  CHECK(r.guard == expected);
  CHECK(r.op.target == append_qualifier(op.target, expected));
  CHECK(r.original_target == op.target);
}

TEST_CASE("empty policy rewrites every delete to nothing") {
  UpdateSpec spec(hospital_dtd());
  XmlTree doc = hospital_doc();
  RewrittenOp r = rewrite_update(spec, parse_update("delete descendant::*"));
  CHECK(r.guard.is_never());
  CHECK(eval(r.op.target, doc, doc.root()).empty());
  ApplyResult res = apply_update(*hospital_dtd(), doc, r);
  CHECK(res.report.status == ApplyStatus::AcceptedNoOp);
  CHECK(res.tree == doc);
}

TEST_CASE("apply deletes only permitted treatments") {
  XmlTree doc = hospital_doc();
  UpdateSpec spec = parse_policy(read_fixture("example1.policy"), hospital_dtd());
  ApplyResult res = run(spec, doc, "delete descendant::treatment");
  CHECK(res.report.status == ApplyStatus::Accepted);
  CHECK(res.report.targets == NodeSet{nth(doc, "treatment", 1), nth(doc, "treatment", 4)});
  CHECK(res.tree.contains(nth(doc, "treatment", 2)));
  CHECK(res.tree.contains(nth(doc, "treatment", 3)));
  CHECK_FALSE(res.tree.contains(nth(doc, "treatment", 1)));
  CHECK(validate(res.tree, *hospital_dtd()).conforming());
}

TEST_CASE("insertInto appends as the last child") {
  XmlTree doc = hospital_doc();
  UpdateSpec spec = policy_text("annot medicalFolder insertInto[analysis] = Y");
  ApplyResult res = run(spec, doc,
                        "insert <analysis/> into descendant::patient[child::pname/text()='Robert']/child::medicalFolder");
  REQUIRE(res.report.status == ApplyStatus::Accepted);
  NodeId folder = child_labelled(doc, patient_named(doc, "Robert"), "medicalFolder");
  CHECK(res.report.targets == NodeSet{folder});
  REQUIRE(res.report.inserted.size() == 1);
  NodeId added = res.report.inserted.front();
  CHECK(res.tree.parent(added) == folder);
  CHECK(res.tree.children(folder).back() == added);
  CHECK(res.tree.label(added) == "analysis");
}

TEST_CASE("replace swaps one subtree") {
  XmlTree doc = hospital_doc();
  UpdateSpec spec = policy_text("annot treatment replace[result,result] = Y");
  ApplyResult res = run(spec, doc,
                        "replace descendant::treatment[child::descp/text()='radiography']/child::result "
                        "with <result>ok</result>");
  REQUIRE(res.report.status == ApplyStatus::Accepted);
  CHECK(serialize(res.tree).find("<result>ok</result>") != std::string::npos);
  CHECK(serialize(res.tree).find("<result>normal</result>") == std::string::npos);
}

TEST_CASE("several targets for a single-target kind is a dynamic error") {
  XmlTree doc = hospital_doc();
  UpdateSpec spec = policy_text("annot treatment insertAsLast[result] = Y");
  ApplyResult res = run(spec, doc, "insert <result>x</result> as last into descendant::treatment");
  CHECK(res.report.status == ApplyStatus::DynamicError);
  CHECK(res.report.targets.size() == 4);
  CHECK(res.tree == doc);
}

TEST_CASE("inserting next to the root is a dynamic error") {
  XmlTree doc = hospital_doc();
  UpdateSpec spec = policy_text("annot hospital insertBefore[dept] = Y");
  ApplyResult res = run(spec, doc, "insert <dept/> before self::hospital");
  CHECK(res.report.status == ApplyStatus::DynamicError);
  CHECK(res.tree == doc);
}

TEST_CASE("schema violations reject the whole update") {
  XmlTree doc = hospital_doc();
  UpdateSpec spec = policy_text("annot dept delete[dname] = Y");
  ApplyResult res = run(spec, doc, "delete descendant::dname");
  CHECK(res.report.status == ApplyStatus::RejectedInvalid);
  CHECK_FALSE(res.report.violations.empty());
  CHECK(res.tree == doc);
  CHECK(serialize(res.tree) == serialize(doc));
}

TEST_CASE("nested delete targets are removed once") {
  XmlTree doc = hospital_doc();
  UpdateSpec spec = policy_text("annot analysis delete[treatment] = Y\nannot treatment delete[treatment] = Y");
  ApplyResult res = run(spec, doc, "delete descendant::treatment");
  REQUIRE(res.report.status == ApplyStatus::Accepted);
  CHECK(res.report.targets == NodeSet{nth(doc, "treatment", 2), nth(doc, "treatment", 3)});
  CHECK_FALSE(res.tree.contains(nth(doc, "treatment", 3)));
  CHECK(res.tree.contains(nth(doc, "treatment", 1)));
}
