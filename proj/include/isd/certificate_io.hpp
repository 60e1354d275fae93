#ifndef ISD_CERTIFICATE_IO_HPP
#define ISD_CERTIFICATE_IO_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "isd/graph_io.hpp"
#include "isd/subdivision.hpp"

namespace isd {

inline nlohmann::ordered_json certificate_to_json(const SubdivisionCertificate& cert) {
  nlohmann::ordered_json j;
  j["pattern"] = graph_to_json(cert.pattern);
  j["branch"] = cert.branch;
  auto& paths = j["paths"] = nlohmann::ordered_json::object();
  for (const auto& [key, path] : cert.paths)
    paths[std::to_string(key.first) + "-" + std::to_string(key.second)] = path;
  return j;
}

inline SubdivisionCertificate certificate_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("pattern") || !j.contains("branch") || !j.contains("paths"))
    throw parse_error("certificate: expected object with 'pattern', 'branch', 'paths'", 0);
  SubdivisionCertificate cert;
  cert.pattern = graph_from_json(j.at("pattern"));
  cert.branch = j.at("branch").get<std::vector<int>>();
  for (const auto& [key, value] : j.at("paths").items()) {
    auto dash = key.find('-');
    if (dash == std::string::npos) throw parse_error("certificate: path key is not 'u-v'", 0);
    int u, v;
    try {
      u = std::stoi(key.substr(0, dash));
      v = std::stoi(key.substr(dash + 1));
    } catch (const std::exception&) {
      throw parse_error("certificate: path key is not 'u-v'", 0);
    }
    auto path = value.get<std::vector<int>>();
    if (u > v) {
      std::swap(u, v);
      std::reverse(path.begin(), path.end());
    }
    cert.paths[{u, v}] = std::move(path);
  }
  return cert;
}

inline SubdivisionCertificate parse_certificate(std::string_view s) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(s);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("certificate: ") + e.what(), e.byte);
  }
  return certificate_from_json(j);
}

}  // namespace isd

#endif  // ISD_CERTIFICATE_IO_HPP
