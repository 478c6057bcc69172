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
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "secxml/cli.hpp"
#include "secxml/security_view.hpp"
#include "secxml/xml_io.hpp"

using namespace secxml;
using namespace secxml::testing;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("secxml-cli-" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(dir_ / name, std::ios::binary) << content;
    return path(name);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  bool exists(const std::string& name) const { return fs::exists(dir_ / name); }

 private:
  fs::path dir_;
};

std::vector<json> events(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
  return out;
}

const std::string kDtd = fixture_path("hospital.dtd");
const std::string kDoc = fixture_path("hospital.xml");

}  // namespace

TEST_CASE("validate") {
  Run ok = invoke({"validate", "--dtd", kDtd, "--doc", kDoc});
  CHECK(ok.code == cli::kOk);
  CHECK(ok.out == "conforming\n");

  Scratch s;
  std::string bad = s.write("bad.xml", "<dname>x</dname>");
  Run wrong = invoke({"validate", "--dtd", kDtd, "--doc", bad});
  CHECK(wrong.code == cli::kDenied);
  CHECK(wrong.out.find("violation: /dname[1]") == 0);
  CHECK(wrong.out.find("violation:", 1) == std::string::npos);
  Run wrong_json = invoke({"validate", "--dtd", kDtd, "--doc", bad, "--format", "jsonl"});
  auto ev = events(wrong_json.out);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0]["event"] == "violation");
  CHECK(ev[0]["kind"] == "root-label");
  CHECK(ev[1]["status"] == "non-conforming");
  CHECK(ev[1]["violations"] == 1);

  std::string broken = s.write("broken.dtd", "root hospital; hospital -> (dept;");
  CHECK(invoke({"validate", "--dtd", broken, "--doc", kDoc}).code == cli::kUsage);
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kUsage);
  CHECK(invoke({"validate", "--doc", kDoc}).code == cli::kUsage);
  CHECK(invoke({"validate", "--dtd", kDtd, "--doc", "/nonexistent.xml"}).code == cli::kUsage);
  CHECK(invoke({"validate", "--dtd", kDtd, "--doc", kDoc, "--format", "yaml"}).code == cli::kUsage);
  CHECK(invoke({"apply", "--dtd", kDtd, "--doc", kDoc, "--policy", fixture_path("example1.policy"), "--op",
             fixture_path("example1.op"), "--out", "x.xml", "--in-place"})
            .code == cli::kUsage);
  CHECK(invoke({"--help"}).code == cli::kOk);
}

TEST_CASE("rewrite") {
  Run r = invoke({"rewrite", "--dtd", kDtd, "--policy", fixture_path("example5.policy"), "--op",
               fixture_path("example5.op")});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.rfind("delete descendant::patients", 0) == 0);
  CHECK(r.out.find("/descendant::result[self::result[parent::*[ancestor-or-self::*[") != std::string::npos);

  Run j = invoke({"rewrite", "--dtd", kDtd, "--policy", fixture_path("example5.policy"), "--op",
               fixture_path("example6.op"), "--access", fixture_path("example5.access"), "--format", "jsonl"});
  CHECK(j.code == cli::kOk);
  auto ev = events(j.out);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0]["event"] == "rewrite");
  CHECK(ev[0]["secure"] == true);
  CHECK(ev[0]["kind"] == "delete");
  CHECK(ev[0]["original"] == to_string(parse_update(read_fixture("example6.op")).target));

  Run plain = invoke({"rewrite", "--dtd", kDtd, "--policy", fixture_path("example5.policy"), "--op",
                      fixture_path("example5.op"), "--format", "jsonl"});
  json p = events(plain.out).at(0);
  CHECK(p["secure"] == false);
  CHECK(parse_xpath(p["target"].get<std::string>()) ==
        append_qualifier(parse_xpath(p["original"].get<std::string>()),
                         parse_qualifier(p["guard"].get<std::string>())));

  Scratch s;
  std::string empty = s.write("empty.policy", "");
  Run none = invoke({"rewrite", "--dtd", kDtd, "--policy", empty, "--op", fixture_path("example1.op"), "--format",
                  "jsonl"});
  CHECK(events(none.out)[0]["guard"] == "not(self::*)");

  std::string bad_op = s.write("bad.op", "delete ancestor::dept");
  CHECK(invoke({"rewrite", "--dtd", kDtd, "--policy", empty, "--op", bad_op}).code == cli::kUsage);
}

TEST_CASE("apply writes only accepted updates") {
  Scratch s;
  const std::vector<std::string> base{"apply", "--dtd", kDtd, "--doc", kDoc, "--policy",
                                      fixture_path("example1.policy"), "--op", fixture_path("example1.op")};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return invoke(args);
  };

  Run dry = with({"--dry-run"});
  CHECK(dry.code == cli::kOk);
  CHECK(dry.out ==
        "/hospital[1]/dept[1]/patients[1]/patient[1]/parent[1]/patient[1]/medicalFolder[1]/treatment[1]\n"
        "/hospital[1]/dept[1]/patients[1]/patient[1]/parent[1]/patient[1]/medicalFolder[1]/diagnosis[1]/"
        "treatment[1]\n"
        "2 nodes affected\n");

  Run written = with({"--out", s.path("out.xml")});
  CHECK(written.code == cli::kOk);
  XmlTree out = parse_xml(s.read("out.xml"));
  CHECK(nodes_labelled(out, "treatment").size() == 2);
  CHECK(out.size() + 8 == hospital_doc().size());

  Run to_stdout = with({});
  CHECK(to_stdout.out == s.read("out.xml"));
  CHECK(to_stdout.err == "2 nodes affected\n");

  Run j = with({"--format", "jsonl", "--dry-run"});
  auto ev = events(j.out);
  REQUIRE(ev.size() == 3);
  CHECK(ev[0]["event"] == "target");
  CHECK(ev[2]["event"] == "summary");
  CHECK(ev[2]["status"] == "accepted");
  CHECK(ev[2]["affected"] == 2);
  CHECK(ev[2]["dry_run"] == true);
}

TEST_CASE("apply reports no-ops and rejections") {
  Scratch s;
  std::string doc = s.write("doc.xml", read_fixture("hospital.xml"));

  Run noop = invoke({"apply", "--dtd", kDtd, "--doc", doc, "--policy", fixture_path("example3.policy"), "--op",
                  fixture_path("example3.op"), "--in-place"});
  CHECK(noop.code == cli::kOk);
  CHECK(noop.out == "0 nodes affected\n");
  const std::string original = s.read("doc.xml");
  CHECK(original == serialize(hospital_doc()));

  std::string policy = s.write("dname.policy", "annot dept delete[dname] = Y\n");
  std::string op = s.write("dname.op", "delete descendant::dname\n");
  Run rejected = invoke({"apply", "--dtd", kDtd, "--doc", doc, "--policy", policy, "--op", op, "--in-place"});
  CHECK(rejected.code == cli::kDenied);
  CHECK(rejected.out.find("rejected-invalid") != std::string::npos);
  CHECK(s.read("doc.xml") == original);
  CHECK_FALSE(s.exists("doc.xml.secxml-tmp"));

  std::string multi_policy = s.write("multi.policy", "annot treatment insertAsLast[result] = Y\n");
  std::string multi_op = s.write("multi.op", "insert <result>x</result> as last into descendant::treatment\n");
  Run multi = invoke({"apply", "--dtd", kDtd, "--doc", doc, "--policy", multi_policy, "--op", multi_op, "--format",
                   "jsonl", "--in-place"});
  CHECK(multi.code == cli::kDenied);
  CHECK(events(multi.out).back()["status"] == "dynamic-error");
  CHECK(s.read("doc.xml") == original);
}

TEST_CASE("apply through the security view") {
  Run r = invoke({"apply", "--dtd", kDtd, "--doc", kDoc, "--policy", fixture_path("example5.policy"), "--op",
               fixture_path("example5.op"), "--access", fixture_path("example5.access"), "--dry-run"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "0 nodes affected\n");
  Run plain = invoke({"apply", "--dtd", kDtd, "--doc", kDoc, "--policy", fixture_path("example5.policy"), "--op",
                   fixture_path("example5.op"), "--dry-run"});
  CHECK(plain.out.find("1 node affected") != std::string::npos);
}

TEST_CASE("view") {
  Scratch s;
  Run r = invoke({"view", "--dtd", kDtd, "--doc", kDoc, "--access", fixture_path("example5.access"), "--out",
               s.path("view.xml"), "--view-dtd", s.path("view.dtd"), "--format", "jsonl"});
  CHECK(r.code == cli::kOk);
  CHECK(s.read("view.xml") == serialize(parse_xml(read_fixture("view_expected.xml"))));
  Dtd view_dtd = parse_dtd(s.read("view.dtd"));
  CHECK(validate(parse_xml(s.read("view.xml")), view_dtd).conforming());
  auto ev = events(r.out);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0]["status"] == "ok");
  CHECK(ev[0]["visible"].get<std::size_t>() + ev[0]["hidden"].get<std::size_t>() == hospital_doc().size());

  std::string empty = s.write("empty.access", "# everything readable\n");
  Run all = invoke({"view", "--dtd", kDtd, "--doc", kDoc, "--access", empty});
  CHECK(all.code == cli::kOk);
  CHECK(all.out == serialize(hospital_doc()));

  std::string bad = s.write("bad.access", "access hospital/dept = [\n");
  CHECK(invoke({"view", "--dtd", kDtd, "--doc", kDoc, "--access", bad}).code == cli::kUsage);
}
