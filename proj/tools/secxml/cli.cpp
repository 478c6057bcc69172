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

#include "secxml/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "secxml/dtd.hpp"
#include "secxml/error.hpp"
#include "secxml/policy.hpp"
#include "secxml/rewriter.hpp"
#include "secxml/security_view.hpp"
#include "secxml/xml_io.hpp"
#include "secxml/xml_tree.hpp"

namespace secxml::cli {
namespace {

using json = nlohmann::json;

enum class Format { Text, Jsonl };

struct Config {
  std::string dtd;
  std::string doc;
  std::string policy;
  std::string access;
  std::string op;
  std::string out;
  std::string view_dtd;
  bool dry_run = false;
  bool in_place = false;
  Format format = Format::Text;
};

// File system failure; reported like a parse error.
class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes through a sibling temporary so readers never see a partial file.
void write_file(const std::string& path, const std::string& content) {
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".secxml-tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoFailure("cannot write '" + tmp.string() + "'");
    os << content;
    if (!os.flush()) throw IoFailure("cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoFailure("cannot replace '" + path + "'");
  }
}

class Reporter {
 public:
  Reporter(Format format, std::ostream& out) : format_(format), out_(out) {}

  bool jsonl() const noexcept { return format_ == Format::Jsonl; }
  void line(const std::string& text) {
    if (!jsonl()) out_ << text << '\n';
  }
  void event(const json& j) {
    if (jsonl()) out_ << j.dump() << '\n';
  }

 private:
  Format format_;
  std::ostream& out_;
};

std::shared_ptr<const Dtd> load_dtd(const std::string& path) {
  return std::make_shared<const Dtd>(parse_dtd(read_file(path)));
}

std::string violation_kind(Violation v) { return std::string(to_string(v)); }

void report_violations(Reporter& rep, const XmlTree& tree, const std::vector<ValidationIssue>& issues) {
  for (const auto& issue : issues) {
    std::string where = tree.contains(issue.node) ? node_path(tree, issue.node) : "?";
    rep.line("violation: " + where + ": " + issue.message);
    rep.event({{"event", "violation"}, {"node", where}, {"kind", violation_kind(issue.kind)}, {"message", issue.message}});
  }
}

int cmd_validate(const Config& cfg, std::ostream& out) {
  auto dtd = load_dtd(cfg.dtd);
  XmlTree doc = parse_xml(read_file(cfg.doc));
  Reporter rep(cfg.format, out);
  ValidationReport report = validate(doc, *dtd);
  report_violations(rep, doc, report.issues);
  bool ok = report.conforming();
  rep.line(ok ? "conforming" : "not conforming: " + std::to_string(report.issues.size()) + " violation(s)");
  rep.event({{"event", "summary"},
             {"command", "validate"},
             {"status", ok ? "conforming" : "non-conforming"},
             {"violations", report.issues.size()}});
  return ok ? kOk : kDenied;
}

struct Prepared {
  std::shared_ptr<const Dtd> dtd;
  RewrittenOp rewritten;
  bool secure = false;
};

Prepared prepare(const Config& cfg) {
  Prepared p;
  p.dtd = load_dtd(cfg.dtd);
  UpdateOp op = parse_update(read_file(cfg.op));
  if (cfg.access.empty()) {
    UpdateSpec policy = parse_policy(read_file(cfg.policy), p.dtd);
    p.rewritten = rewrite_update(policy, op);
  } else {
    // Update privileges are stated over the view schema.
    SecurityView view(parse_access_spec(read_file(cfg.access), p.dtd));
    UpdateSpec policy = parse_policy(read_file(cfg.policy), view.view_dtd_ptr());
    p.rewritten = secure_update(view, policy, op);
    p.secure = true;
  }
  return p;
}

int cmd_rewrite(const Config& cfg, std::ostream& out) {
  Prepared p = prepare(cfg);
  Reporter rep(cfg.format, out);
  const RewrittenOp& r = p.rewritten;
  rep.line(to_string(r.op));
  rep.event({{"event", "rewrite"},
             {"command", "rewrite"},
             {"kind", std::string(to_string(r.op.kind))},
             {"secure", p.secure},
             {"original", to_string(r.original_target)},
             {"guard", to_string(r.guard)},
             {"target", to_string(r.op.target)},
             {"operation", to_string(r.op)}});
  return kOk;
}

int cmd_apply(const Config& cfg, std::ostream& out, std::ostream& err) {
  Prepared p = prepare(cfg);
  XmlTree doc = parse_xml(read_file(cfg.doc));
  std::string destination = cfg.in_place ? cfg.doc : cfg.out;
  bool doc_to_stdout = destination.empty() && !cfg.dry_run;
  // Keep stdout clean for the document when it is written there.
  Reporter rep(cfg.format, doc_to_stdout && cfg.format == Format::Text ? err : out);

  json summary = {{"event", "summary"}, {"command", "apply"}, {"dry_run", cfg.dry_run}, {"secure", p.secure}};
  ValidationReport before = validate(doc, *p.dtd);
  if (!before.conforming()) {
    report_violations(rep, doc, before.issues);
    rep.line("rejected: input document does not conform to the DTD");
    summary.update({{"status", "rejected-invalid"}, {"affected", 0}, {"reason", "input document does not conform"}});
    rep.event(summary);
    return kDenied;
  }

  ApplyResult result = apply_update(*p.dtd, doc, p.rewritten);
  const ApplyReport& report = result.report;
  for (NodeId t : report.targets) {
    std::string path = node_path(doc, t);
    if (cfg.dry_run) rep.line(path);
    rep.event({{"event", "target"}, {"node", path}});
  }
  summary.update({{"status", std::string(to_string(report.status))},
                  {"affected", report.accepted() ? report.targets.size() : 0},
                  {"reason", report.reason}});
  if (!report.accepted()) {
    report_violations(rep, result.tree, report.violations);
    rep.line(std::string(to_string(report.status)) + ": " + report.reason);
    rep.event(summary);
    return kDenied;
  }
  rep.line(std::to_string(report.targets.size()) + " node" + (report.targets.size() == 1 ? "" : "s") + " affected");
  if (!cfg.dry_run) {
    std::string text = serialize(result.tree);
    if (destination.empty()) {
      if (rep.jsonl()) {
        summary["document"] = text;
      } else {
        out << text;
      }
    } else {
      write_file(destination, text);
      summary["output"] = destination;
    }
  }
  rep.event(summary);
  return kOk;
}

int cmd_view(const Config& cfg, std::ostream& out, std::ostream& err) {
  auto dtd = load_dtd(cfg.dtd);
  AccessSpec spec = parse_access_spec(read_file(cfg.access), dtd);
  XmlTree doc = parse_xml(read_file(cfg.doc));
  Reporter rep(cfg.format, cfg.out.empty() && cfg.format == Format::Text ? err : out);
  json summary = {{"event", "summary"}, {"command", "view"}};
  ValidationReport before = validate(doc, *dtd);
  if (!before.conforming()) {
    report_violations(rep, doc, before.issues);
    rep.line("rejected: input document does not conform to the DTD");
    summary.update({{"status", "rejected-invalid"}});
    rep.event(summary);
    return kDenied;
  }
  MaterializedView view = extract_view(spec, doc);
  std::string text = serialize(view.tree);
  std::size_t visible = view.mapping.accessible.size();
  summary.update({{"status", "ok"}, {"visible", visible}, {"hidden", doc.size() - visible}});
  if (!cfg.view_dtd.empty()) {
    write_file(cfg.view_dtd, derive_view_dtd(spec).to_string());
    summary["view_dtd"] = cfg.view_dtd;
  }
  if (cfg.out.empty()) {
    if (rep.jsonl()) {
      summary["document"] = text;
    } else {
      out << text;
    }
  } else {
    write_file(cfg.out, text);
    summary["output"] = cfg.out;
  }
  rep.line(std::to_string(visible) + " visible node(s), " + std::to_string(doc.size() - visible) + " hidden");
  rep.event(summary);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Update and read access control for XML documents", "secxml"};
  app.require_subcommand(1);
  Config cfg;
  std::map<std::string, Format> formats{{"text", Format::Text}, {"jsonl", Format::Jsonl}};

  auto common = [&](CLI::App* sub) {
    sub->add_option("--dtd", cfg.dtd, "Schema in the line-based DTD format")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", cfg.format, "Report format: text or jsonl")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check that a document conforms to a DTD");
  common(validate_cmd);
  validate_cmd->add_option("--doc", cfg.doc, "XML document")->required()->check(CLI::ExistingFile);

  CLI::App* rewrite_cmd = app.add_subcommand("rewrite", "Print the safe rewriting of an update operation");
  common(rewrite_cmd);
  rewrite_cmd->add_option("--policy", cfg.policy, "Update policy")->required()->check(CLI::ExistingFile);
  rewrite_cmd->add_option("--op", cfg.op, "File holding one update operation")->required()->check(CLI::ExistingFile);
  rewrite_cmd->add_option("--access", cfg.access, "Read-access specification")->check(CLI::ExistingFile);

  CLI::App* apply_cmd = app.add_subcommand("apply", "Rewrite an update operation and apply it");
  common(apply_cmd);
  apply_cmd->add_option("--doc", cfg.doc, "XML document")->required()->check(CLI::ExistingFile);
  apply_cmd->add_option("--policy", cfg.policy, "Update policy")->required()->check(CLI::ExistingFile);
  apply_cmd->add_option("--op", cfg.op, "File holding one update operation")->required()->check(CLI::ExistingFile);
  apply_cmd->add_option("--access", cfg.access, "Read-access specification")->check(CLI::ExistingFile);
  auto* out_opt = apply_cmd->add_option("--out", cfg.out, "Write the updated document here (default: stdout)");
  apply_cmd->add_flag("--in-place", cfg.in_place, "Overwrite --doc on acceptance")->excludes(out_opt);
  apply_cmd->add_flag("--dry-run", cfg.dry_run, "Only list the affected nodes");

  CLI::App* view_cmd = app.add_subcommand("view", "Materialise the security view of a document");
  common(view_cmd);
  view_cmd->add_option("--doc", cfg.doc, "XML document")->required()->check(CLI::ExistingFile);
  view_cmd->add_option("--access", cfg.access, "Read-access specification")->required()->check(CLI::ExistingFile);
  view_cmd->add_option("--out", cfg.out, "Write the view here (default: stdout)");
  view_cmd->add_option("--view-dtd", cfg.view_dtd, "Also write the derived view schema here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  try {
    if (chosen == validate_cmd) return cmd_validate(cfg, out);
    if (chosen == rewrite_cmd) return cmd_rewrite(cfg, out);
    if (chosen == apply_cmd) return cmd_apply(cfg, out, err);
    return cmd_view(cfg, out, err);
  } catch (const std::exception& e) {
    // Parse, schema, fragment and I/O failures all count as usage errors.
    if (cfg.format == Format::Jsonl) {
      out << json{{"event", "error"}, {"command", command}, {"status", "error"}, {"message", e.what()}}.dump()
          << '\n';
    }
    err << "secxml " << command << ": " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace secxml::cli
