#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <httplib.h>

#include "qrisk/errors.hpp"
#include "qrisk/service.hpp"

namespace {

httplib::Server* g_server = nullptr;

void handle_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HTTP API for kill-chain risk assessment", "qrisk-server"};
  std::string host = "127.0.0.1";
  int port = 8787;
  std::string catalog_path;
  std::string portfolio_path;
  std::string data_dir = ".";
  std::string static_dir;
  bool lenient = false;
  app.add_option("--host", host, "Bind address")->capture_default_str();
  app.add_option("--port", port, "Bind port")->capture_default_str()->check(CLI::Range(0, 65535));
  app.add_option("--catalog", catalog_path, "Seed catalog JSON file");
  app.add_option("--portfolio", portfolio_path, "Seed portfolio JSON file");
  app.add_option("--data-dir", data_dir, "Directory for /api/save and /api/load")
      ->capture_default_str();
  app.add_option("--static-dir", static_dir, "Directory served under /");
  app.add_flag("--lenient", lenient, "Ignore unknown keys in input documents");
  CLI11_PARSE(app, argc, argv);

  qrisk::Catalog catalog;
  qrisk::Portfolio portfolio;
  try {
    const qrisk::LoadOptions load{lenient};
    if (!catalog_path.empty()) catalog = qrisk::load_catalog(read_file(catalog_path), load);
    if (!portfolio_path.empty()) portfolio = qrisk::load_portfolio(read_file(portfolio_path), load);
  } catch (const qrisk::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  qrisk::service::Service service({data_dir, lenient}, std::move(catalog), std::move(portfolio));
  httplib::Server server;
  service.register_routes(server);
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
    std::cerr << "error: static directory '" << static_dir << "' does not exist\n";
    return 2;
  }

  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);

  std::cerr << fmt::format("listening on http://{}:{}\n", host, port);
  if (!server.listen(host, port)) {
    std::cerr << fmt::format("error: cannot listen on {}:{}\n", host, port);
    return 2;
  }
  return 0;
}
