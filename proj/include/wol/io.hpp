#pragma once

// File formats: certificate JSON, JSON-lines traces, certificate bundles
// with content-hash manifests, and small filesystem helpers.

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "omega.hpp"
#include "parse.hpp"
#include "pipeline.hpp"
#include "progressions.hpp"
#include "stages.hpp"

namespace wol {

using nlohmann::json;

inline uint64_t fnv_file_hash(const std::string& content) {
  return expr::fnv_str(content);
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// ---- certificates ----

inline json cert_node_json(const ProofCertificate::NodePtr& n) {
  json out;
  out["class"] = n->cls == NodeClass::Axiomatic ? "axiom"
                 : n->cls == NodeClass::Stuck ? "stuck" : "rule";
  if (n->cls == NodeClass::Reducible) {
    switch (n->rule) {
      case FormulaKind::Or: out["rule"] = "or"; break;
      case FormulaKind::And: out["rule"] = "and"; break;
      case FormulaKind::Exists: out["rule"] = "exists"; break;
      case FormulaKind::Forall: out["rule"] = "forall"; break;
      default: out["rule"] = "?"; break;
    }
    out["redex"] = n->redex;
  }
  json seq = json::array();
  for (const auto& f : n->sequent) seq.push_back(print(f));
  out["sequent"] = seq;
  out["height"] = n->height.to_text();
  if (!n->sampled.empty()) out["sampled"] = n->sampled;
  if (!n->kids.empty()) {
    json kids = json::array();
    for (const auto& k : n->kids) kids.push_back(cert_node_json(k));
    out["kids"] = kids;
  }
  return out;
}

// The premise generator of forall nodes is intensional: any numeral premise
// is rebuilt by replaying the canonical strategy at the node's path with the
// recorded fuel and caps, so the certificate stays finite and self-contained.
inline json cert_to_json(const ProofCertificate& cert) {
  json out;
  out["format"] = "wol-omega-certificate";
  out["version"] = 1;
  out["sentence"] = print(cert.psi);
  out["fuel"] = cert.fuel;
  out["sample_width"] = cert.sample_width;
  out["depth_cap"] = cert.depth_cap;
  out["generator"] = "replay(sentence, path, fuel, sample_width, depth_cap)";
  out["tree"] = cert_node_json(cert.root);
  return out;
}

inline ProofCertificate::NodePtr cert_node_from_json(const json& j) {
  auto n = std::make_shared<ProofCertificate::Node>();
  std::string cls = j.at("class").get<std::string>();
  n->cls = cls == "axiom" ? NodeClass::Axiomatic
           : cls == "stuck" ? NodeClass::Stuck : NodeClass::Reducible;
  if (n->cls == NodeClass::Reducible) {
    std::string rule = j.at("rule").get<std::string>();
    n->rule = rule == "or" ? FormulaKind::Or
              : rule == "and" ? FormulaKind::And
              : rule == "exists" ? FormulaKind::Exists : FormulaKind::Forall;
    n->redex = j.at("redex").get<size_t>();
  }
  for (const auto& s : j.at("sequent")) n->sequent.push_back(parse_sentence(s.get<std::string>()));
  n->height = CnfOrdinal::parse(j.at("height").get<std::string>());
  if (j.contains("sampled"))
    for (const auto& m : j.at("sampled")) n->sampled.push_back(m.get<uint64_t>());
  if (j.contains("kids"))
    for (const auto& k : j.at("kids")) n->kids.push_back(cert_node_from_json(k));
  return n;
}

inline ProofCertificate cert_from_json(const json& j) {
  if (j.at("format").get<std::string>() != "wol-omega-certificate")
    throw std::runtime_error("not a certificate file");
  ProofCertificate cert;
  cert.psi = parse_sentence(j.at("sentence").get<std::string>());
  cert.fuel = j.at("fuel").get<uint64_t>();
  cert.sample_width = j.at("sample_width").get<uint64_t>();
  cert.depth_cap = j.at("depth_cap").get<uint64_t>();
  cert.root = cert_node_from_json(j.at("tree"));
  return cert;
}

// ---- traces ----

inline std::string trace_to_jsonl(const std::vector<TraceEvent>& events) {
  std::string out;
  for (const auto& ev : events) {
    json line;
    line["stage"] = ev.stage;
    line["event"] = ev.kind;
    json payload = json::array();
    payload.push_back(ev.a);
    payload.push_back(ev.b);
    payload.push_back(ev.c);
    line["payload"] = payload;
    out += line.dump();
    out += '\n';
  }
  return out;
}

// tree-exploration trace for the sentence pipeline
inline std::string tree_trace_jsonl(const SentencePipeline& p, uint64_t depth, uint64_t width,
                                    const EvalContext& ctx = {}) {
  std::string out;
  std::vector<std::vector<Val>> frontier{{}};
  if (!p.tree.contains({}, ctx)) return out;
  for (uint64_t d = 0; d <= depth && !frontier.empty(); d++) {
    std::vector<std::vector<Val>> next;
    for (const auto& s : frontier) {
      json line;
      line["depth"] = d;
      json node = json::array();
      for (const auto& v : s) node.push_back(v.to_dec());
      line["node"] = node;
      line["code"] = encode_seq(s).to_dec();
      auto kids = tree_children(p.tree, s, width, ctx);
      line["children"] = kids.size();
      out += line.dump();
      out += '\n';
      if (d < depth)
        for (auto& k : kids) next.push_back(std::move(k));
    }
    frontier = std::move(next);
  }
  return out;
}

// ---- bundles ----

struct BundleWriter {
  std::filesystem::path dir;
  json manifest = json::object();

  explicit BundleWriter(std::filesystem::path d) : dir(std::move(d)) {
    std::filesystem::create_directories(dir);
    manifest["format"] = "wol-bundle";
    manifest["version"] = 1;
    manifest["files"] = json::object();
  }

  void add(const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    char hex[32];
    std::snprintf(hex, sizeof hex, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv_file_hash(content)));
    manifest["files"][name] = hex;
  }

  void finish() {
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  }
};

} // namespace wol
