#include "cli/cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "cli/render.hpp"
#include "twinops/edged/latency.hpp"
#include "twinops/edged/server.hpp"
#include "twinops/twin.hpp"

namespace twinops::cli {

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::NoPath:
    case Errc::NoDetections:
      return kExitNoSolution;
    case Errc::IoError:
    case Errc::BindFailure:
      return kExitIo;
    default:
      return kExitConfig;
  }
}

namespace {

struct Globals {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
  std::string output = "text";

  bool json() const { return output == "json"; }
};

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
};

Scenario load(const Globals& g) {
  if (g.scenario.empty()) throw Error(Errc::ScenarioInvalid, "no scenario given (use --scenario or TWINOPS_SCENARIO)");
  return load_scenario(g.scenario);
}

void emit_json(std::ostream& out, Json doc, const Globals& g, const Stopwatch& clock) {
  if (!g.deterministic) doc["elapsed_ms"] = clock.ms();
  out << doc.dump(2) << "\n";
}

void emit_elapsed(std::ostream& out, const Globals& g, const Stopwatch& clock) {
  if (!g.deterministic) out << "elapsed: " << fixed(clock.ms(), 3) << " ms\n";
}

// ---- localize ----

struct LocalizeArgs {
  std::string algo = "coverage";
  int iterations = 3;
};

int cmd_localize(const Globals& g, const LocalizeArgs& a, std::ostream& out) {
  Stopwatch clock;
  const Scenario s = load(g);
  const auto algo = parse_localize_algo(a.algo);
  const auto result = run_localization(s.graph, s.alarms, algo, a.iterations);
  if (g.json()) {
    Json doc = result;
    doc["algo"] = algo == LocalizeAlgo::MessagePassing ? "mp" : "coverage";
    doc["alarms"] = s.alarms;
    emit_json(out, doc, g, clock);
  } else {
    print_localization(out, result, s.alarms);
    emit_elapsed(out, g, clock);
  }
  return kExitOk;
}

// ---- navigate ----

struct NavigateArgs {
  std::string from;
  std::string to;
  std::string target;
  std::optional<int> shelf_level;
  std::optional<double> arrow_spacing;
  bool render = false;
};

int cmd_navigate(const Globals& g, const NavigateArgs& a, std::ostream& out) {
  Stopwatch clock;
  Scenario s = load(g);
  if (a.arrow_spacing) s.navigation.options.arrow_spacing_m = *a.arrow_spacing;
  NavQuery q;
  q.from = a.from;
  if (!a.to.empty()) q.to = a.to;
  if (!a.target.empty()) q.target_element = a.target;
  q.shelf_level = a.shelf_level;
  const auto grid = s.nav_grid();
  const NavAnswer answer = navigate(s, grid, q);
  if (g.json()) {
    Json doc = answer.path;
    doc["from"] = answer.from;
    doc["to"] = answer.to;
    doc["shelf_level"] = answer.shelf_level;
    doc["length_m"] = answer.path.cost.value() * grid.resolution_m();
    if (answer.target_shelf) doc["target_shelf"] = *answer.target_shelf;
    emit_json(out, doc, g, clock);
  } else {
    print_navigation(out, answer, grid);
    if (a.render) {
      out << "\n";
      render_route(out, grid, answer.path);
    }
    emit_elapsed(out, g, clock);
  }
  return kExitOk;
}

// ---- card-id ----

struct CardIdArgs {
  std::string layout;
  std::optional<double> jitter;
  double threshold = 0.5;
};

int cmd_card_id(const Globals& g, const CardIdArgs& a, std::ostream& out) {
  Stopwatch clock;
  const Scenario s = load(g);
  CardIdQuery q;
  if (!a.layout.empty()) {
    q.layout = a.layout;
  } else if (!s.layouts.empty()) {
    q.layout = s.layouts.front().id;
  } else {
    throw Error(Errc::DetectorUnavailable, "scenario defines no synthetic layouts");
  }
  q.seed = g.seed.value_or(0);
  q.jitter_sigma = a.jitter;
  q.match.confidence_threshold = a.threshold;
  const auto detector = s.make_detector();
  const CardIdAnswer answer = identify_cards(s, detector, q, s.alarms);
  if (g.json()) {
    Json doc = answer.overlay;
    doc["layout"] = q.layout;
    doc["detections"] = answer.detections;
    doc["assignment"] = answer.assignment;
    doc["root_cause_id"] = answer.localization ? Json(answer.localization->root_cause_id) : Json(nullptr);
    emit_json(out, doc, g, clock);
  } else {
    print_card_id(out, q.layout, answer);
    emit_elapsed(out, g, clock);
  }
  return kExitOk;
}

// ---- simulate-qos ----

struct QosArgs {
  std::optional<double> link_km;
  std::optional<double> capacity;
  std::string meter;
  std::optional<double> cap;
  std::optional<double> burst;
  std::optional<double> duration;
  std::optional<double> ar_gbps;
  std::optional<double> cbr_gbps;
  std::string wifi;
  double bin_width_ms = 0.0;
};

bool on_off(const std::string& v, const char* flag) {
  if (v == "on") return true;
  if (v == "off") return false;
  throw Error(Errc::InvalidConfig, std::string(flag) + " expects on|off");
}

int cmd_simulate_qos(const Globals& g, const QosArgs& a, std::ostream& out) {
  Stopwatch clock;
  const Scenario s = load(g);
  QosDefaults q = s.qos;
  if (a.link_km) q.link.length_km = *a.link_km;
  if (a.capacity) q.link.capacity_gbps = *a.capacity;
  if (!a.meter.empty()) q.meter.enabled = on_off(a.meter, "--meter");
  if (a.cap) q.meter.cbr_cap_gbps = *a.cap;
  if (a.burst) q.meter.burst_bytes = *a.burst;
  if (a.duration) q.options.duration_s = *a.duration;
  if (!a.wifi.empty()) q.options.wifi.enabled = on_off(a.wifi, "--wifi");
  if (g.seed) q.options.seed = *g.seed;
  for (auto& f : q.flows) {
    if (f.cls == netqos::TrafficClass::AR && a.ar_gbps) f.offered_gbps = *a.ar_gbps;
    if (f.cls == netqos::TrafficClass::CBR && a.cbr_gbps) f.offered_gbps = *a.cbr_gbps;
  }
  if (q.flows.empty()) throw Error(Errc::InvalidConfig, "scenario defines no qos flows");

  const auto report = netqos::simulate(q.link, q.flows, q.meter, q.options);
  std::optional<Histogram> hist;
  if (a.bin_width_ms > 0.0) {
    hist.emplace(a.bin_width_ms);
    hist->add(report.ar_rtt_ms);
  }
  if (g.json()) {
    Json doc = report;
    doc["link"] = {{"capacity_gbps", q.link.capacity_gbps},
                   {"length_km", q.link.length_km},
                   {"per_km_delay_us", q.link.per_km_delay_us},
                   {"propagation_rtt_ms", 2.0 * netqos::propagation_delay_ms(q.link.length_km, q.link.per_km_delay_us)}};
    doc["meter"] = {{"enabled", q.meter.enabled}, {"cbr_cap_gbps", q.meter.cbr_cap_gbps}, {"burst_bytes", q.meter.burst_bytes}};
    doc["seed"] = q.options.seed;
    if (hist) doc["ar_rtt_histogram"] = {{"bin_width_ms", a.bin_width_ms}, {"bins", hist->bins()}};
    emit_json(out, doc, g, clock);
  } else {
    print_qos(out, q.link, q.meter, report);
    if (hist) {
      out << "\nAR RTT histogram (bin " << fixed(a.bin_width_ms, 4) << " ms):\n";
      hist->render(out);
    }
    emit_elapsed(out, g, clock);
  }
  return kExitOk;
}

// ---- serve ----

std::atomic<bool> g_stop_requested{false};

extern "C" void on_stop_signal(int) { g_stop_requested = true; }

struct ServeArgs {
  std::string listen = "127.0.0.1:7070";
  std::string ws_listen;
};

int cmd_serve(const Globals& g, const ServeArgs& a, std::ostream& out, std::ostream& err) {
  auto scenario = std::make_shared<const Scenario>(load(g));
  edged::ServerConfig config;
  config.stream = edged::parse_listen_address(a.listen);
  if (!a.ws_listen.empty()) config.websocket = edged::parse_listen_address(a.ws_listen);
  auto service = std::make_shared<edged::EdgeService>(scenario);
  edged::EdgeServer server(service, config);

  out << "listening on " << config.stream.host << ":" << server.port();
  if (auto ws = server.websocket_port()) out << ", websocket on " << config.websocket->host << ":" << *ws;
  out << std::endl;

  g_stop_requested = false;
  std::signal(SIGINT, on_stop_signal);
  std::signal(SIGTERM, on_stop_signal);
  while (!g_stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  const auto st = service->stats();
  err << "stopped: " << st.frames_in << " frames in, " << st.replies_out << " replies, " << st.errors_out
      << " errors, " << st.events_out << " events\n";
  return kExitOk;
}

// ---- probe ----

struct ProbeArgs {
  std::string connect = "127.0.0.1:7070";
  int count = 100;
  std::string kind = "ping";
  std::string layout;
  double bin_width_ms = 0.1;
};

int cmd_probe(const Globals& g, const ProbeArgs& a, std::ostream& out) {
  const auto addr = edged::parse_listen_address(a.connect);
  if (a.count < 1) throw Error(Errc::InvalidArgument, "--count must be positive");
  edged::EdgeClient client(addr.host, addr.port);
  Json payload = Json::object();
  if (a.kind == "card_id_request") {
    client.request("hello", {{"capabilities", {"ar"}}});
    payload = {{"layout", a.layout.empty() ? std::string("tn1-shelf1") : a.layout}, {"seed", g.seed.value_or(0)}};
  } else if (a.kind != "ping" && a.kind != "localize_request") {
    throw Error(Errc::InvalidArgument, "probe supports ping, localize_request and card_id_request");
  }
  edged::LatencyLog log;
  int failures = 0;
  for (int i = 0; i < a.count; ++i) {
    const Json reply = client.request(a.kind, payload);
    if (!reply.value("ok", false)) ++failures;
    log.add(client.last_latency());
  }
  const auto inference = log.inference_histogram(a.bin_width_ms);
  const auto network = log.network_histogram(a.bin_width_ms);
  const auto total = log.total_histogram(a.bin_width_ms);
  if (g.json()) {
    out << Json{{"kind", a.kind},
                {"count", log.size()},
                {"failures", failures},
                {"bin_width_ms", a.bin_width_ms},
                {"inference", inference.bins()},
                {"network", network.bins()},
                {"total", total.bins()}}
               .dump(2)
        << "\n";
  } else {
    out << a.kind << ": " << log.size() << " requests, " << failures << " errors\n";
    out << "\ninference (ms):\n";
    inference.render(out);
    out << "\nnetwork round trip (ms):\n";
    network.render(out);
    out << "\ntotal (ms):\n";
    total.render(out);
  }
  return failures == 0 ? kExitOk : kExitNoSolution;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optical network digital twin: fault localization, navigation, card identification, QoS and edge service"};
  app.name("twinops");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--scenario", g.scenario, "Scenario file")->envname("TWINOPS_SCENARIO");
  app.add_option("--seed", g.seed, "RNG seed for synthetic frames and simulations");
  app.add_flag("--deterministic", g.deterministic, "Omit wall-clock fields from reports");
  app.add_option("--output", g.output, "Report format")->check(CLI::IsMember({"text", "json"}));

  LocalizeArgs loc;
  auto* localize = app.add_subcommand("localize", "Rank root-cause candidates for the scenario alarms");
  localize->add_option("--algo", loc.algo, "coverage or mp")->check(CLI::IsMember({"coverage", "default", "mp"}));
  localize->add_option("--iters", loc.iterations, "Message-passing rounds")->check(CLI::PositiveNumber);

  NavigateArgs nav;
  auto* navigate_cmd = app.add_subcommand("navigate", "Plan a route between named points");
  navigate_cmd->add_option("--from", nav.from, "Start point")->required();
  auto* to_opt = navigate_cmd->add_option("--to", nav.to, "Destination point");
  auto* target_opt = navigate_cmd->add_option("--target", nav.target, "Element whose rack is the destination");
  to_opt->excludes(target_opt);
  navigate_cmd->add_option("--shelf-level", nav.shelf_level, "Flag level: 0 lower, 1 upper");
  navigate_cmd->add_option("--arrow-spacing", nav.arrow_spacing, "Arrow spacing in metres")->check(CLI::PositiveNumber);
  navigate_cmd->add_flag("--render", nav.render, "Draw the route on an ASCII map");

  CardIdArgs card;
  auto* card_cmd = app.add_subcommand("card-id", "Identify cards on a synthetic frame and colour alarms");
  card_cmd->add_option("--layout", card.layout, "Synthetic layout id (default: first in scenario)");
  card_cmd->add_option("--jitter", card.jitter, "Override box jitter sigma")->check(CLI::NonNegativeNumber);
  card_cmd->add_option("--threshold", card.threshold, "Confidence threshold")->check(CLI::Range(0.0, 1.0));

  QosArgs qos;
  auto* qos_cmd = app.add_subcommand("simulate-qos", "Simulate AR and CBR traffic on the shared path");
  qos_cmd->add_option("--link", qos.link_km, "Fibre length in km")->check(CLI::NonNegativeNumber);
  qos_cmd->add_option("--capacity", qos.capacity, "Link capacity in Gb/s");
  qos_cmd->add_option("--meter", qos.meter, "on|off")->check(CLI::IsMember({"on", "off"}));
  qos_cmd->add_option("--cap", qos.cap, "CBR meter rate in Gb/s");
  qos_cmd->add_option("--burst", qos.burst, "Meter bucket depth in bytes");
  qos_cmd->add_option("--duration", qos.duration, "Simulated seconds");
  qos_cmd->add_option("--ar", qos.ar_gbps, "Offered AR load in Gb/s");
  qos_cmd->add_option("--cbr", qos.cbr_gbps, "Offered CBR load in Gb/s");
  qos_cmd->add_option("--wifi", qos.wifi, "on|off access hop for AR")->check(CLI::IsMember({"on", "off"}));
  qos_cmd->add_option("--bin-width", qos.bin_width_ms, "AR RTT histogram bin width in ms (0: none)")
      ->check(CLI::NonNegativeNumber);

  ServeArgs srv;
  auto* serve_cmd = app.add_subcommand("serve", "Run the edge service");
  serve_cmd->add_option("--listen", srv.listen, "Stream listener host:port");
  serve_cmd->add_option("--ws-listen", srv.ws_listen, "WebSocket listener host:port");

  ProbeArgs probe;
  auto* probe_cmd = app.add_subcommand("probe", "Measure request latency against a running service");
  probe_cmd->add_option("--connect", probe.connect, "Service host:port");
  probe_cmd->add_option("--count", probe.count, "Number of requests");
  probe_cmd->add_option("--kind", probe.kind, "ping, localize_request or card_id_request");
  probe_cmd->add_option("--layout", probe.layout, "Layout for card_id_request");
  probe_cmd->add_option("--bin-width", probe.bin_width_ms, "Histogram bin width in ms")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (localize->parsed()) return cmd_localize(g, loc, out);
    if (navigate_cmd->parsed()) {
      if (nav.to.empty() && nav.target.empty()) throw Error(Errc::InvalidArgument, "navigate needs --to or --target");
      return cmd_navigate(g, nav, out);
    }
    if (card_cmd->parsed()) return cmd_card_id(g, card, out);
    if (qos_cmd->parsed()) return cmd_simulate_qos(g, qos, out);
    if (serve_cmd->parsed()) return cmd_serve(g, srv, out, err);
    if (probe_cmd->parsed()) return cmd_probe(g, probe, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace twinops::cli
