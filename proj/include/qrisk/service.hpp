#pragma once

// HTTP+JSON front end over one in-memory catalog and portfolio.
//
// State lives in immutable snapshots. Readers grab the current snapshot
// pointer and never block on writers; mutations are serialized, copy the
// snapshot, apply the edit and publish the copy with revision + 1.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "qrisk/catalog.hpp"
#include "qrisk/chain.hpp"
#include "qrisk/errors.hpp"

namespace httplib {
class Server;
}

namespace qrisk::service {

struct SessionState {
  Catalog catalog;
  Portfolio portfolio;
  std::uint64_t revision = 0;
};

/// If-Match named a revision that is no longer current.
class StaleRevisionError : public Error {
 public:
  StaleRevisionError(std::uint64_t expected, std::uint64_t current);
  std::uint64_t current() const noexcept { return current_; }

 private:
  std::uint64_t current_;
};

struct ServiceOptions {
  // Root for /api/save and /api/load; request paths must stay inside it.
  std::filesystem::path data_dir = ".";
  bool lenient = false;
};

class Service {
 public:
  explicit Service(ServiceOptions options = {}, Catalog catalog = {}, Portfolio portfolio = {});

  std::shared_ptr<const SessionState> snapshot() const;

  /// Runs `edit` on a copy of the current state and publishes the copy with
  /// revision + 1. An exception from `edit` leaves the state untouched.
  /// Throws StaleRevisionError when `expected` is set and not current.
  std::uint64_t commit(std::optional<std::uint64_t> expected,
                       const std::function<void(SessionState&)>& edit);

  /// Registers every /api route on `server`.
  void register_routes(httplib::Server& server);

  const ServiceOptions& options() const { return options_; }

 private:
  ServiceOptions options_;
  mutable std::mutex snapshot_mutex_;  // guards the pointer swap only
  std::shared_ptr<const SessionState> current_;
  std::mutex writer_mutex_;  // single writer
};

/// Current UTC time as an ISO 8601 string with second precision.
std::string utc_timestamp();

}  // namespace qrisk::service
