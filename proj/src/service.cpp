#include "qrisk/service.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <httplib.h>

#include "qrisk/assessment.hpp"
#include "qrisk/json_io.hpp"

namespace qrisk::service {

namespace {

using json::Json;

constexpr const char* kJsonType = "application/json";

// An HTTP failure: status plus the {code, message, findings?} body.
struct HttpError {
  int status;
  std::string code;
  std::string message;
  std::vector<Finding> findings;
};

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(json::dump(body), kJsonType);
}

void send_error(httplib::Response& res, const HttpError& e) {
  Json body{{"code", e.code}, {"message", e.message}};
  if (!e.findings.empty()) {
    Json findings = Json::array();
    for (const auto& f : e.findings) findings.push_back(json::to_json(f));
    body["findings"] = std::move(findings);
  }
  send_json(res, e.status, body);
}

void set_revision(httplib::Response& res, std::uint64_t revision) {
  res.set_header("ETag", fmt::format("\"{}\"", revision));
}

// Accepts 7, "7" and W/"7". "*" and an absent header impose no condition.
std::optional<std::uint64_t> expected_revision(const httplib::Request& req) {
  if (!req.has_header("If-Match")) return std::nullopt;
  std::string value = req.get_header_value("If-Match");
  if (value == "*") return std::nullopt;
  if (value.starts_with("W/")) value.erase(0, 2);
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    value = value.substr(1, value.size() - 2);
  }
  std::uint64_t revision = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), revision);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw HttpError{400, "bad_request", fmt::format("malformed If-Match header '{}'", value), {}};
  }
  return revision;
}

Json parse_body(const httplib::Request& req) {
  try {
    return json::parse_document(req.body);
  } catch (const ParseError& e) {
    throw HttpError{400, "malformed_json", e.what(), {}};
  }
}

HttpError validation_failure(std::string message, std::vector<Finding> findings) {
  return {400, "validation_failed", std::move(message), std::move(findings)};
}

struct RequestConfig {
  AssessmentConfig config;
  std::optional<int> threshold;
};

// Body of /api/assess and /api/whatif. `extra` lists additional allowed keys.
RequestConfig parse_config(const Json& body, bool lenient, const std::set<std::string>& extra) {
  if (!body.is_object()) throw HttpError{400, "bad_config", "request body must be an object", {}};
  RequestConfig out;
  for (const auto& [key, value] : body.items()) {
    if (key == "method") {
      const auto method = value.is_string() ? parse_method(value.get<std::string>()) : std::nullopt;
      if (!method) {
        throw HttpError{400, "bad_config", "method must be one of max, avg, geom", {}};
      }
      out.config.method = *method;
    } else if (key == "global_multiplier") {
      if (!value.is_number() || !in_multiplier_range(value.get<double>())) {
        throw HttpError{400, "bad_config", "global_multiplier must be a number in (0, 2]", {}};
      }
      out.config.global_multiplier = value.get<double>();
    } else if (key == "threshold") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 1 ||
          value.get<std::int64_t>() > 25) {
        throw HttpError{400, "bad_config", "threshold must be an integer in 1..25", {}};
      }
      out.threshold = static_cast<int>(value.get<std::int64_t>());
    } else if (!lenient && !extra.contains(key)) {
      throw HttpError{400, "bad_config", fmt::format("unknown key '{}'", key), {}};
    }
  }
  return out;
}

Portfolio effective_portfolio(const SessionState& state, const RequestConfig& rc) {
  Portfolio p = state.portfolio;
  if (rc.threshold) p.context.acceptance_threshold = *rc.threshold;
  return p;
}

// Runs an assessment-style computation, mapping engine errors to statuses.
template <class F>
Json evaluate(F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw HttpError{422, "invalid_portfolio", e.what(), e.findings()};
  } catch (const NotFoundError& e) {
    throw HttpError{404, "not_found", e.what(), {}};
  } catch (const DomainError& e) {
    throw HttpError{400, "domain_error", e.what(), {}};
  }
}

void require_assessable(const SessionState& state) {
  if (state.portfolio.chains.empty()) {
    throw HttpError{422, "empty_portfolio", "portfolio contains no kill chains", {}};
  }
}

std::filesystem::path resolve_data_path(const std::filesystem::path& root, const Json& body) {
  if (!body.is_object() || !body.contains("path") || !body["path"].is_string()) {
    throw HttpError{400, "bad_request", "body must be {\"path\": \"<file>\"}", {}};
  }
  const std::filesystem::path rel(body["path"].get<std::string>());
  if (rel.empty() || rel.is_absolute()) {
    throw HttpError{400, "bad_request", "path must be relative to the data directory", {}};
  }
  for (const auto& part : rel) {
    if (part == "..") throw HttpError{400, "bad_request", "path must not contain '..'", {}};
  }
  return root / rel;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw HttpError{404, "not_found", fmt::format("cannot read '{}'", path.string()), {}};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

KillChain parse_chain(const Json& body, const Catalog& catalog, bool lenient) {
  KillChain chain;
  try {
    chain = json::chain_from_json(body, LoadOptions{lenient});
  } catch (const ValidationError& e) {
    throw validation_failure(e.what(), e.findings());
  }
  const auto report = validate_chain(chain, catalog);
  if (!report.ok()) {
    const auto& first = *std::find_if(report.findings.begin(), report.findings.end(),
                                      [](const Finding& f) { return f.severity == Severity::Error; });
    throw validation_failure(fmt::format("{}: {}", first.path, first.message), report.findings);
  }
  return chain;
}

Json chain_list(const SessionState& s) {
  Json chains = Json::array();
  for (const auto& [id, chain] : s.portfolio.chains) chains.push_back(json::to_json(chain));
  return chains;
}

// Wraps a handler so HttpError and stray exceptions become JSON error bodies.
template <class F>
httplib::Server::Handler guarded(F f) {
  return [f = std::move(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const HttpError& e) {
      send_error(res, e);
    } catch (const StaleRevisionError& e) {
      set_revision(res, e.current());
      send_error(res, {409, "stale_revision", e.what(), {}});
    } catch (const NotFoundError& e) {
      send_error(res, {404, "not_found", e.what(), {}});
    } catch (const ValidationError& e) {
      send_error(res, validation_failure(e.what(), e.findings()));
    } catch (const std::exception& e) {
      send_error(res, {500, "internal_error", e.what(), {}});
    }
  };
}

}  // namespace

StaleRevisionError::StaleRevisionError(std::uint64_t expected, std::uint64_t current)
    : Error(fmt::format("If-Match revision {} is stale; current revision is {}", expected, current)),
      current_(current) {}

Service::Service(ServiceOptions options, Catalog catalog, Portfolio portfolio)
    : options_(std::move(options)),
      current_(std::make_shared<const SessionState>(
          SessionState{std::move(catalog), std::move(portfolio), 0})) {}

std::shared_ptr<const SessionState> Service::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return current_;
}

std::uint64_t Service::commit(std::optional<std::uint64_t> expected,
                              const std::function<void(SessionState&)>& edit) {
  std::lock_guard writer(writer_mutex_);
  const auto base = snapshot();
  if (expected && *expected != base->revision) throw StaleRevisionError(*expected, base->revision);
  auto next = std::make_shared<SessionState>(*base);
  edit(*next);
  next->revision = base->revision + 1;
  const auto revision = next->revision;
  {
    std::lock_guard lock(snapshot_mutex_);
    current_ = std::move(next);
  }
  return revision;
}

void Service::register_routes(httplib::Server& server) {
  // Mutation responses: {"revision": n, ...extra} plus the ETag.
  auto mutated = [](httplib::Response& res, int status, std::uint64_t revision, Json extra = {}) {
    Json body{{"revision", revision}};
    if (extra.is_object()) body.update(extra);
    set_revision(res, revision);
    send_json(res, status, body);
  };

  server.Get("/api/catalog", guarded([this](const httplib::Request&, httplib::Response& res) {
    const auto s = snapshot();
    set_revision(res, s->revision);
    send_json(res, 200, {{"revision", s->revision}, {"catalog", json::to_json(s->catalog)}});
  }));

  server.Put("/api/catalog", guarded([this, mutated](const httplib::Request& req,
                                                     httplib::Response& res) {
    const auto body = parse_body(req);
    Catalog catalog;
    try {
      catalog = json::catalog_from_json(body, LoadOptions{options_.lenient});
    } catch (const ValidationError& e) {
      throw validation_failure(e.what(), e.findings());
    }
    const auto revision = commit(expected_revision(req), [&](SessionState& s) {
      s.catalog = std::move(catalog);
    });
    mutated(res, 200, revision);
  }));

  server.Get("/api/chains", guarded([this](const httplib::Request&, httplib::Response& res) {
    const auto s = snapshot();
    set_revision(res, s->revision);
    send_json(res, 200, {{"revision", s->revision}, {"chains", chain_list(*s)}});
  }));

  server.Post("/api/chains", guarded([this, mutated](const httplib::Request& req,
                                                     httplib::Response& res) {
    const auto body = parse_body(req);
    const auto expected = expected_revision(req);
    std::string id;
    const auto revision = commit(expected, [&](SessionState& s) {
      auto chain = parse_chain(body, s.catalog, options_.lenient);
      if (s.portfolio.chains.contains(chain.id)) {
        throw HttpError{409, "duplicate_id", fmt::format("chain '{}' already exists", chain.id), {}};
      }
      id = chain.id;
      s.portfolio.chains.emplace(id, std::move(chain));
    });
    res.set_header("Location", "/api/chains/" + id);
    mutated(res, 201, revision, {{"id", id}});
  }));

  server.Get(R"(/api/chains/([^/]+))", guarded([this](const httplib::Request& req,
                                                      httplib::Response& res) {
    const auto s = snapshot();
    const auto it = s->portfolio.chains.find(req.matches[1].str());
    if (it == s->portfolio.chains.end()) {
      throw HttpError{404, "not_found", fmt::format("no chain '{}'", req.matches[1].str()), {}};
    }
    set_revision(res, s->revision);
    send_json(res, 200, {{"revision", s->revision}, {"chain", json::to_json(it->second)}});
  }));

  server.Put(R"(/api/chains/([^/]+))", guarded([this, mutated](const httplib::Request& req,
                                                               httplib::Response& res) {
    const std::string id = req.matches[1].str();
    const auto body = parse_body(req);
    const auto revision = commit(expected_revision(req), [&](SessionState& s) {
      auto it = s.portfolio.chains.find(id);
      if (it == s.portfolio.chains.end()) {
        throw HttpError{404, "not_found", fmt::format("no chain '{}'", id), {}};
      }
      auto chain = parse_chain(body, s.catalog, options_.lenient);
      if (chain.id != id) {
        throw validation_failure(
            fmt::format("body id '{}' does not match '{}'", chain.id, id),
            {Finding{Severity::Error, "id", fmt::format("expected '{}'", id)}});
      }
      it->second = std::move(chain);
    });
    mutated(res, 200, revision, {{"id", id}});
  }));

  server.Delete(R"(/api/chains/([^/]+))", guarded([this, mutated](const httplib::Request& req,
                                                                  httplib::Response& res) {
    const std::string id = req.matches[1].str();
    const auto revision = commit(expected_revision(req), [&](SessionState& s) {
      if (s.portfolio.chains.erase(id) == 0) {
        throw HttpError{404, "not_found", fmt::format("no chain '{}'", id), {}};
      }
    });
    mutated(res, 200, revision, {{"id", id}});
  }));

  server.Post("/api/assess", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    const auto rc = parse_config(body, options_.lenient, {});
    const auto s = snapshot();
    require_assessable(*s);
    auto result = evaluate([&] {
      return json::to_json(
          assess_portfolio(effective_portfolio(*s, rc), s->catalog, rc.config, utc_timestamp()));
    });
    result["revision"] = s->revision;
    set_revision(res, s->revision);
    send_json(res, 200, result);
  }));

  server.Post("/api/whatif", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    const auto rc = parse_config(body, options_.lenient, {"overrides"});
    WhatIfOverride overrides;
    if (body.contains("overrides")) {
      try {
        overrides = json::overrides_from_json(body["overrides"], LoadOptions{options_.lenient});
      } catch (const ValidationError& e) {
        throw validation_failure(e.what(), e.findings());
      }
    }
    const auto s = snapshot();
    require_assessable(*s);
    // Speculative results carry no timestamp so repeated calls at one
    // revision are byte-identical.
    auto result = evaluate([&] {
      return json::to_json(what_if(effective_portfolio(*s, rc), s->catalog, rc.config, overrides));
    });
    result["revision"] = s->revision;
    set_revision(res, s->revision);
    send_json(res, 200, result);
  }));

  server.Post("/api/save", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto path = resolve_data_path(options_.data_dir, parse_body(req));
    const auto s = snapshot();
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << json::dump(Json{{"catalog", json::to_json(s->catalog)},
                           {"portfolio", json::to_json(s->portfolio)}});
    if (!out) {
      throw HttpError{500, "io_error", fmt::format("cannot write '{}'", path.string()), {}};
    }
    set_revision(res, s->revision);
    send_json(res, 200, {{"revision", s->revision}, {"path", path.string()}});
  }));

  server.Post("/api/load", guarded([this, mutated](const httplib::Request& req,
                                                   httplib::Response& res) {
    const auto path = resolve_data_path(options_.data_dir, parse_body(req));
    Json document;
    try {
      document = json::parse_document(read_file(path));
    } catch (const ParseError& e) {
      throw HttpError{400, "malformed_json", e.what(), {}};
    }
    if (!document.is_object() || !document.contains("catalog") || !document.contains("portfolio")) {
      throw HttpError{400, "bad_request", "snapshot must hold \"catalog\" and \"portfolio\"", {}};
    }
    const LoadOptions load{options_.lenient};
    Catalog catalog;
    Portfolio portfolio;
    try {
      catalog = json::catalog_from_json(document["catalog"], load);
      portfolio = json::portfolio_from_json(document["portfolio"], load);
    } catch (const ValidationError& e) {
      throw validation_failure(e.what(), e.findings());
    }
    const auto report = validate_portfolio(portfolio, catalog);
    if (!report.ok()) throw validation_failure("snapshot portfolio does not validate", report.findings);
    const auto revision = commit(expected_revision(req), [&](SessionState& s) {
      s.catalog = std::move(catalog);
      s.portfolio = std::move(portfolio);
    });
    mutated(res, 200, revision);
  }));

  server.Get("/api/matrix", guarded([](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, json::to_json(RiskMatrix::standard()));
  }));
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace qrisk::service
