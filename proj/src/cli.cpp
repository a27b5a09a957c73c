#include "anchorlight/cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "anchorlight/crawler.hpp"
#include "anchorlight/link_analysis.hpp"
#include "anchorlight/service.hpp"

namespace anchorlight::cli {

namespace {

struct CrawlArgs {
  std::vector<std::string> seeds;
  int depth = 2;
  double timeout_s = 10.0;
  int delay_ms = 200;
  std::size_t max_pages = 0;
  std::string user_agent = "anchorlight/1.0";
  int parallel = 8;
  bool no_stem = false;
  bool quiet = false;
};

struct AnalyzeArgs {
  std::vector<std::string> skip;
  double damping = 0.85;
  int pagerank_iterations = 50;
  int hits_iterations = 100;
};

struct SearchArgs {
  std::optional<std::string> q;
  std::vector<std::string> weights;
  std::string preset = "descriptive-anchors";
  int scheme = 4;
  std::string mode = "qd";
  std::size_t limit = 10;
  bool json = false;
  bool check = false;
};

struct ServeArgs {
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
};

service::Server* g_server = nullptr;

extern "C" void handle_stop_signal(int) {
  if (g_server) g_server->stop();
}

std::optional<IndexStore> open_existing(const std::string& path, bool read_only, std::ostream& err) {
  try {
    OpenOptions options;
    options.read_only = read_only;
    return IndexStore::open(path, options);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return std::nullopt;
  }
}

int cmd_crawl(const std::string& index_path, const CrawlArgs& args, const CLI::App& sub, std::ostream& out,
              std::ostream& err) {
  if (args.seeds.empty()) {
    err << "error: at least one --seed is required\n" << sub.help();
    return kExitUsage;
  }
  if (args.depth < 0 || args.timeout_s <= 0.0 || args.parallel < 1) {
    err << "error: --depth must be >= 0, --timeout > 0, --parallel >= 1\n" << sub.help();
    return kExitUsage;
  }
  try {
    OpenOptions options;
    options.create_if_missing = true;
    options.stemming = !args.no_stem;
    options.stop_list_version = text::StopList::standard().version();
    auto store = IndexStore::open(index_path, options);
    crawl::CrawlConfig cfg;
    cfg.seeds = args.seeds;
    cfg.max_depth = args.depth;
    cfg.fetch_timeout = std::chrono::milliseconds(static_cast<long>(args.timeout_s * 1000));
    cfg.per_host_delay = std::chrono::milliseconds(args.delay_ms);
    if (args.max_pages) cfg.max_pages = args.max_pages;
    cfg.user_agent = args.user_agent;
    cfg.max_in_flight = args.parallel;
    cfg.log = args.quiet ? nullptr : &err;
    auto report = crawl::crawl(store, cfg);
    out << report.to_json() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

void print_step(const links::StepReport& r, std::ostream& out) {
  out << std::left << std::setw(10) << r.name << " iterations=" << r.iterations << " residual=" << std::scientific
      << std::setprecision(3) << r.residual << std::defaultfloat << " seconds=" << std::fixed << std::setprecision(3)
      << r.seconds << std::defaultfloat;
  if (!r.note.empty()) out << " (" << r.note << ")";
  out << '\n';
}

int cmd_analyze(const std::string& index_path, const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> kSteps = {"lengths", "pagerank", "hits", "myhits", "indexes"};
  for (const auto& s : args.skip)
    if (std::find(kSteps.begin(), kSteps.end(), s) == kSteps.end()) {
      err << "error: unknown step '" << s << "' (steps: lengths, pagerank, hits, myhits, indexes)\n";
      return kExitUsage;
    }
  auto skipped = [&](std::string_view step) {
    return std::find(args.skip.begin(), args.skip.end(), step) != args.skip.end();
  };
  auto store = open_existing(index_path, false, err);
  if (!store) return kExitRuntime;
  try {
    if (store->indexed_page_count() == 0) {
      err << "nothing to analyze: the index has no crawled pages\n";
      return kExitRuntime;
    }
    auto logger = [&err](std::string name) {
      return [&err, name](int iter, double residual) {
        err << "  " << name << " iter " << iter << " residual " << std::scientific << std::setprecision(3)
            << residual << std::defaultfloat << '\n';
      };
    };
    links::PageRankOptions pr;
    pr.damping = args.damping;
    pr.max_iterations = args.pagerank_iterations;
    links::HitsOptions hits;
    hits.max_iterations = args.hits_iterations;

    if (!skipped("lengths")) print_step(links::compute_page_lengths(*store), out);
    bool need_graph = !skipped("pagerank") || !skipped("hits") || !skipped("myhits");
    if (need_graph) {
      auto graph = links::build_graph(*store);
      if (!skipped("pagerank")) {
        pr.progress = logger("pagerank");
        print_step(links::compute_pagerank(*store, graph, pr), out);
      }
      if (!skipped("hits")) {
        hits.progress = logger("hits");
        print_step(links::compute_hits_global(*store, graph, hits), out);
      }
      if (!skipped("myhits")) {
        pr.progress = logger("mypagerank");
        hits.progress = logger("myhits");
        print_step(links::compute_weighted_variants(*store, graph, links::unit_weight(), pr, hits), out);
      }
    }
    if (!skipped("indexes")) {
      store->create_hot_indexes();
      out << "indexes    linkwords(wordid), linkwords(linkid)\n";
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run_check(const IndexStore& store, std::ostream& out) {
  bool ok = true;
  auto check_sum = [&](ScoreTable t) {
    auto scores = store.all_scores(t);
    if (scores.empty()) {
      out << table_name(t) << ": pending\n";
      ok = false;
      return;
    }
    double sum = 0.0;
    for (const auto& [p, v] : scores) sum += v;
    bool pass = std::abs(sum - 1.0) <= 1e-6;
    ok = ok && pass;
    out << table_name(t) << ": sum " << std::setprecision(12) << sum << (pass ? " ok" : " FAIL") << '\n';
  };
  auto check_norm = [&](ScoreTable t) {
    auto scores = store.all_scores(t);
    if (scores.empty()) {
      out << table_name(t) << ": pending\n";
      ok = false;
      return;
    }
    double sq = 0.0;
    for (const auto& [p, v] : scores) sq += v * v;
    bool pass = std::abs(std::sqrt(sq) - 1.0) <= 1e-6;
    ok = ok && pass;
    out << table_name(t) << ": norm " << std::setprecision(12) << std::sqrt(sq) << (pass ? " ok" : " FAIL") << '\n';
  };
  check_sum(ScoreTable::PageRank);
  check_sum(ScoreTable::MyPageRank);
  check_norm(ScoreTable::AuthHits);
  check_norm(ScoreTable::HubHits);
  check_norm(ScoreTable::AuthMyHits);
  check_norm(ScoreTable::HubMyHits);
  return ok ? kExitOk : kExitRuntime;
}

void print_table(const query::QueryResponse& response, std::ostream& out) {
  if (response.results.empty()) {
    out << "no matches\n";
    return;
  }
  int rank = 1;
  for (const auto& r : response.results) {
    out << std::setw(3) << rank++ << "  " << std::fixed << std::setprecision(4) << r.combined << "  " << r.url << '\n'
        << "      ";
    for (const auto& [s, v] : r.breakdown) out << ' ' << query::name(s) << '=' << std::setprecision(4) << v;
    out << std::defaultfloat << '\n';
  }
}

int cmd_search(const std::string& index_path, const SearchArgs& args, const CLI::App& sub, std::ostream& out,
               std::ostream& err) {
  if (!args.check && (!args.q || args.q->find_first_not_of(" \t\r\n") == std::string::npos)) {
    err << "error: --q must be a non-empty query\n" << sub.help();
    return kExitUsage;
  }
  auto mode = query::parse_mode(args.mode);
  if (!mode) {
    err << "error: --mode must be qd or qi\n";
    return kExitUsage;
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& w : args.weights) {
    auto eq = w.find('=');
    if (eq == std::string::npos) {
      err << "error: --w expects name=value, got '" << w << "'\n";
      return kExitUsage;
    }
    pairs.emplace_back(w.substr(0, eq), w.substr(eq + 1));
  }
  service::SearchRequest request;
  try {
    request.weights = service::parse_weights(pairs, args.preset, args.scheme);
  } catch (const service::BadRequest& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  auto store = open_existing(index_path, true, err);
  if (!store) return kExitRuntime;
  if (args.check) return run_check(*store, out);

  request.q = *args.q;
  request.mode = *mode;
  request.limit = args.limit;
  try {
    auto response = query::run_query(*store, request.q, request.weights, request.mode, request.limit);
    if (args.json)
      out << response.to_json() << '\n';
    else
      print_table(response, out);
    return kExitOk;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NeedsAnalysis) {
      err << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
    if (e.code() == ErrorCode::EmptyQuery) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_serve(const std::string& index_path, const ServeArgs& args, const std::string& preset, std::ostream& out,
              std::ostream& err) {
  try {
    service::ServeConfig cfg;
    cfg.index_path = index_path;
    cfg.bind = args.bind;
    cfg.port = args.port;
    cfg.static_dir = args.static_dir;
    cfg.default_preset = preset;
    service::Server server(cfg);
    int port = server.bind();
    if (port < 0) {
      err << "error: cannot bind " << args.bind << ":" << args.port << '\n';
      return kExitRuntime;
    }
    out << "serving " << index_path << " on http://" << args.bind << ":" << port << "/" << std::endl;
    g_server = &server;
    auto previous_int = std::signal(SIGINT, handle_stop_signal);
    auto previous_term = std::signal(SIGTERM, handle_stop_signal);
    bool ok = server.listen();
    std::signal(SIGINT, previous_int);
    std::signal(SIGTERM, previous_term);
    g_server = nullptr;
    return ok ? kExitOk : kExitRuntime;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"anchorlight: crawl, analyze and search a small web index"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Configuration file (TOML); command-line flags take precedence");
  std::string index_path = "anchorlight.db";
  app.add_option("--index", index_path, "Index file")->capture_default_str();

  CrawlArgs crawl_args;
  auto* crawl_cmd = app.add_subcommand("crawl", "Breadth-first crawl from seed URLs into the index");
  crawl_cmd->add_option("--seed", crawl_args.seeds, "Seed URL (repeatable)");
  crawl_cmd->add_option("--depth", crawl_args.depth, "Maximum link distance from a seed")->capture_default_str();
  crawl_cmd->add_option("--timeout", crawl_args.timeout_s, "Fetch timeout in seconds")->capture_default_str();
  crawl_cmd->add_option("--delay-ms", crawl_args.delay_ms, "Minimum delay between requests to one host")
      ->capture_default_str();
  crawl_cmd->add_option("--max-pages", crawl_args.max_pages, "Stop after this many fetches (0 = no cap)");
  crawl_cmd->add_option("--user-agent", crawl_args.user_agent, "User-Agent header")->capture_default_str();
  crawl_cmd->add_option("--parallel", crawl_args.parallel, "Concurrent fetches")->capture_default_str();
  crawl_cmd->add_flag("--no-stem", crawl_args.no_stem, "Create the index without stemming");
  crawl_cmd->add_flag("--quiet", crawl_args.quiet, "No per-page progress on stderr");

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute query-independent score tables");
  analyze_cmd->add_option("--skip", analyze_args.skip, "Step to skip: lengths, pagerank, hits, myhits, indexes");
  analyze_cmd->add_option("--damping", analyze_args.damping, "PageRank damping factor")->capture_default_str();
  analyze_cmd->add_option("--pagerank-iterations", analyze_args.pagerank_iterations)->capture_default_str();
  analyze_cmd->add_option("--hits-iterations", analyze_args.hits_iterations)->capture_default_str();

  SearchArgs search_args;
  auto* search_cmd = app.add_subcommand("search", "Run one query");
  search_cmd->add_option("--q", search_args.q, "Query text");
  search_cmd->add_option("--w", search_args.weights, "Scorer weight name=value (repeatable)");
  search_cmd->add_option("--preset", search_args.preset, "Weight preset used when no --w is given")
      ->capture_default_str();
  search_cmd->add_option("--scheme", search_args.scheme, "Anchor scheme 1..4")->capture_default_str();
  search_cmd->add_option("--mode", search_args.mode, "qd (query-dependent) or qi (query-independent only)")
      ->capture_default_str();
  search_cmd->add_option("--limit", search_args.limit, "Maximum results")->capture_default_str();
  search_cmd->add_flag("--json", search_args.json, "Print the JSON response");
  search_cmd->add_flag("--check", search_args.check, "Verify stored link-analysis normalization");

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON API and the browser UI");
  serve_cmd->add_option("--bind", serve_args.bind, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve_args.port, "Port")->capture_default_str();
  serve_cmd->add_option("--static-dir", serve_args.static_dir, "Directory with the UI bundle");
  serve_cmd->add_option("--preset", search_args.preset, "Default weight preset")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  if (*crawl_cmd) return cmd_crawl(index_path, crawl_args, *crawl_cmd, out, err);
  if (*analyze_cmd) return cmd_analyze(index_path, analyze_args, out, err);
  if (*search_cmd) return cmd_search(index_path, search_args, *search_cmd, out, err);
  if (*serve_cmd) return cmd_serve(index_path, serve_args, search_args.preset, out, err);
  return kExitUsage;
}

}  // namespace anchorlight::cli
