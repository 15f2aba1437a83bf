#include "heatasym/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "heatasym/error.hpp"
#include "heatasym/oracle.hpp"
#include "heatasym/verify.hpp"
#include "parallel.hpp"

namespace heatasym::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Command parse_command(const std::string& s) {
  if (s == "eval") return Command::Eval;
  if (s == "oracle") return Command::Oracle;
  if (s == "expand") return Command::Expand;
  if (s == "converge") return Command::Converge;
  if (s == "extract") return Command::Extract;
  if (s == "recurrence") return Command::Recurrence;
  throw ParseError("unknown command '" + s + "'");
}

SignMode parse_mode(const std::string& s) {
  if (s == "alternating") return SignMode::Alternating;
  if (s == "paper_literal") return SignMode::PaperLiteral;
  throw ParseError("unknown mode '" + s + "' (alternating | paper_literal)");
}

std::vector<double> read_numbers(const json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError(std::string(what) + " must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void require_finite(const std::vector<double>& v, const char* what) {
  for (double d : v) {
    if (!std::isfinite(d)) throw ValidationError(std::string(what) + " must be finite");
  }
}

ordered_json num(double v) { return ordered_json(v); }

}  // namespace

const char* to_string(Command command) {
  switch (command) {
    case Command::Eval:
      return "eval";
    case Command::Oracle:
      return "oracle";
    case Command::Expand:
      return "expand";
    case Command::Converge:
      return "converge";
    case Command::Extract:
      return "extract";
    case Command::Recurrence:
      return "recurrence";
  }
  return "?";
}

const char* to_string(Format format) { return format == Format::Csv ? "csv" : "doc"; }

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "doc") return Format::Doc;
  throw ParseError("unknown format '" + text + "' (csv | doc)");
}

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ParseError("run config must be a JSON object");
  RunConfig cfg;
  try {
    const int version = doc.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion) throw ParseError("unsupported config schema_version " + std::to_string(version));
    if (!doc.contains("command")) throw ParseError("run config needs 'command'");
    cfg.command = parse_command(doc.at("command").get<std::string>());

    if (!doc.contains("profile")) throw ParseError("run config needs 'profile'");
    const json& prof = doc.at("profile");
    if (prof.is_string()) {
      std::filesystem::path p = prof.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      cfg.profile = read_profile_document(p);
    } else {
      cfg.profile = parse_profile_document(prof);
    }

    if (doc.contains("grid")) {
      const json& g = doc.at("grid");
      if (!g.is_object()) throw ParseError("'grid' must be an object");
      if (g.contains("x")) cfg.x = read_numbers(g.at("x"), "grid.x");
      if (g.contains("eta")) cfg.eta = read_numbers(g.at("eta"), "grid.eta");
      if (g.contains("t")) cfg.t = read_numbers(g.at("t"), "grid.t");
      if (g.contains("t_geometric")) {
        const json& tg = g.at("t_geometric");
        const auto more = geometric_grid(tg.at("min").get<double>(), tg.at("max").get<double>(),
                                         tg.at("count").get<int>());
        cfg.t.insert(cfg.t.end(), more.begin(), more.end());
      }
    }
    cfg.n_max = doc.value("n_max", cfg.n_max);
    if (doc.contains("n_max_list")) cfg.n_max_list = doc.at("n_max_list").get<std::vector<int>>();
    cfg.tol = doc.value("tol", cfg.tol);
    if (doc.contains("mode")) cfg.mode = parse_mode(doc.at("mode").get<std::string>());
    if (doc.contains("orders")) {
      for (const auto& o : doc.at("orders")) cfg.orders.push_back({o.at("n").get<int>(), o.value("log", false)});
    }
    cfg.subtract_through = doc.value("subtract_through", 0);
    if (doc.contains("thresholds")) {
      const json& th = doc.at("thresholds");
      if (th.contains("r_log")) cfg.r_log_threshold = th.at("r_log").get<double>();
      if (th.contains("r_plain")) cfg.r_plain_threshold = th.at("r_plain").get<double>();
    }
    if (doc.contains("output")) cfg.output = doc.at("output").get<std::string>();
    if (doc.contains("format")) cfg.format = parse_format(doc.at("format").get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("run config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("run config: ") + e.what());
  }

  // Command-specific defaults and checks.
  if (!(cfg.tol > 0.0)) throw ValidationError("tol must be positive");
  if (cfg.n_max < 0) throw ValidationError("n_max must be >= 0");
  require_finite(cfg.x, "grid.x");
  require_finite(cfg.eta, "grid.eta");
  require_finite(cfg.t, "grid.t");
  for (double t : cfg.t) {
    if (!(t > 0.0)) throw ValidationError("grid.t values must be positive");
  }
  switch (cfg.command) {
    case Command::Eval:
    case Command::Oracle:
      if (cfg.t.empty() || (cfg.x.empty() && cfg.eta.empty())) {
        throw ValidationError("eval/oracle need grid.t and grid.x or grid.eta");
      }
      break;
    case Command::Expand:
      if (cfg.eta.empty()) throw ValidationError("expand needs grid.eta");
      if (cfg.n_max < 1) throw ValidationError("expand needs n_max >= 1");
      break;
    case Command::Converge:
      if (cfg.eta.empty()) throw ValidationError("converge needs grid.eta");
      if (cfg.t.empty()) cfg.t = default_t_grid();
      if (cfg.n_max_list.empty()) {
        for (int n = 0; n <= cfg.n_max; ++n) cfg.n_max_list.push_back(n);
      }
      break;
    case Command::Extract:
      if (cfg.eta.empty()) throw ValidationError("extract needs grid.eta");
      if (cfg.orders.empty()) throw ValidationError("extract needs orders");
      if (cfg.t.empty()) cfg.t = default_t_grid();
      break;
    case Command::Recurrence:
      if (cfg.n_max < 1) throw ValidationError("recurrence needs n_max >= 1");
      if (cfg.eta.empty()) cfg.eta = linear_grid(-3.0, 3.0, 25);
      break;
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError("config " + path.string() + ": " + e.what());
  }
  return parse_run_config(doc, path.parent_path());
}

Table execute(const RunConfig& cfg) {
  const InitialProfile1D profile = build_profile(cfg.profile);
  Table out;

  switch (cfg.command) {
    case Command::Eval: {
      out.columns = {"x", "t", "eta", "n_max", "value"};
      const auto e = SolutionExpansion::build(profile, cfg.n_max, cfg.mode);
      for (double t : cfg.t) {
        auto emit = [&](const SelfSimilarPoint& pt) {
          out.rows.push_back({num(pt.x()), num(t), num(pt.eta()), cfg.n_max, num(e.evaluate_eta(pt.eta(), t, cfg.n_max))});
        };
        for (double x : cfg.x) emit(SelfSimilarPoint::from_xt(x, t));
        for (double eta : cfg.eta) emit(SelfSimilarPoint::from_eta(eta, t));
      }
      break;
    }
    case Command::Oracle: {
      out.columns = {"x", "t", "eta", "value", "error_estimate", "nodes_used"};
      std::vector<SelfSimilarPoint> pts;
      for (double t : cfg.t) {
        for (double x : cfg.x) pts.push_back(SelfSimilarPoint::from_xt(x, t));
        for (double eta : cfg.eta) pts.push_back(SelfSimilarPoint::from_eta(eta, t));
      }
      std::vector<OracleResult> res(pts.size());
      detail::parallel_for(pts.size(), [&](std::size_t i) {
        res[i] = heat_oracle_1d(profile, pts[i].x(), pts[i].t(), cfg.tol);
      });
      for (std::size_t i = 0; i < pts.size(); ++i) {
        out.rows.push_back({num(pts[i].x()), num(pts[i].t()), num(pts[i].eta()), num(res[i].value),
                            num(res[i].error_estimate), res[i].nodes_used});
      }
      break;
    }
    case Command::Expand: {
      out.columns = {"eta", "n", "h_n0", "h_n1"};
      const auto e = SolutionExpansion::build(profile, cfg.n_max, cfg.mode);
      const auto& table = e.decaying();
      for (double eta : cfg.eta) {
        for (int n = 1; n <= cfg.n_max; ++n) {
          out.rows.push_back({num(eta), n, num(table.h_n0(n, eta)), num(table.h_n1(n, eta))});
        }
      }
      break;
    }
    case Command::Converge: {
      out.columns = {"eta", "N", "slope", "pass", "status", "points_used"};
      ConvergenceOptions opts;
      opts.mode = cfg.mode;
      const auto rep = convergence_report(profile, cfg.eta, cfg.t, cfg.n_max_list, cfg.tol, opts);
      for (const auto& c : rep.cells) {
        const bool pass = c.status == CellStatus::Pass || c.status == CellStatus::Exact;
        out.rows.push_back({num(c.eta), c.n_max, num(c.slope), pass, to_string(c.status), c.points_used});
      }
      out.verification_failed = !rep.passed();
      break;
    }
    case Command::Extract: {
      out.columns = {"eta", "n", "log", "coefficient", "residual_norm", "condition_number"};
      ExtractionOptions opts;
      opts.mode = cfg.mode;
      opts.subtract_through = cfg.subtract_through;
      for (double eta : cfg.eta) {
        const auto fit = extract_coefficients(profile, eta, cfg.orders, cfg.t, cfg.tol, opts);
        for (std::size_t i = 0; i < fit.orders.size(); ++i) {
          out.rows.push_back({num(eta), fit.orders[i].n, fit.orders[i].has_log, num(fit.coefficients[i]),
                              num(fit.residual_norm), num(fit.condition_number)});
        }
      }
      break;
    }
    case Command::Recurrence: {
      out.columns = {"n", "mode", "r_log", "r_plain"};
      const auto e = SolutionExpansion::build(profile, cfg.n_max, cfg.mode);
      for (int n = 1; n <= cfg.n_max; ++n) {
        const auto r = recurrence_residual(e.decaying(), n, cfg.eta);
        out.rows.push_back({n, heatasym::to_string(cfg.mode), num(r.r_log), num(r.r_plain)});
        if (cfg.r_log_threshold && r.r_log > *cfg.r_log_threshold) out.verification_failed = true;
        if (cfg.r_plain_threshold && r.r_plain > *cfg.r_plain_threshold) out.verification_failed = true;
      }
      break;
    }
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string render_csv(const Table& table) {
  std::ostringstream os;
  for (std::size_t j = 0; j < table.columns.size(); ++j) os << (j ? "," : "") << table.columns[j];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) os << ',';
      const auto& cell = row[j];
      if (cell.is_number_float()) {
        os << format_double(cell.get<double>());
      } else if (cell.is_string()) {
        os << cell.get<std::string>();
      } else {
        os << cell.dump();
      }
    }
    os << '\n';
  }
  return os.str();
}

std::string render_doc(const RunConfig& cfg, const Table& table) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = to_string(cfg.command);
  doc["profile"] = to_json(cfg.profile);
  doc["mode"] = heatasym::to_string(cfg.mode);
  doc["tol"] = cfg.tol;
  doc["columns"] = table.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r = ordered_json::object();
    for (std::size_t j = 0; j < row.size(); ++j) {
      const auto& cell = row[j];
      // JSON has no NaN; keep the CSV spelling as a string.
      if (cell.is_number_float() && !std::isfinite(cell.get<double>())) {
        r[table.columns[j]] = format_double(cell.get<double>());
      } else {
        r[table.columns[j]] = cell;
      }
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  if (cfg.command == Command::Converge || cfg.command == Command::Recurrence) {
    doc["verification"] = table.verification_failed ? "fail" : "pass";
  }
  return doc.dump(2) + "\n";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& log) {
  try {
    const Table table = execute(config);
    const std::string text = config.format == Format::Csv ? render_csv(table) : render_doc(config, table);
    if (config.output.empty()) {
      out << text;
    } else {
      std::ofstream f(config.output, std::ios::binary | std::ios::trunc);
      if (!f) throw ValidationError("cannot write " + config.output.string());
      f << text;
      if (!f) throw ValidationError("write failed: " + config.output.string());
    }
    if (table.verification_failed) {
      log << "heatasym: verification FAIL\n";
      return kExitVerificationFail;
    }
    return kExitOk;
  } catch (const ParseError& e) {
    log << "heatasym: parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    log << "heatasym: parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ValidationError& e) {
    log << "heatasym: validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    log << "heatasym: validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    log << "heatasym: validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    log << "heatasym: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Long-time asymptotics of the heat equation: oracle, expansion and verification"};
  std::string config_path;
  std::string out_path;
  std::string format;
  bool quiet = false;
  app.add_option("--config", config_path, "run configuration (JSON)")->required();
  app.add_option("--out", out_path, "output file (overrides the config)");
  app.add_option("--format", format, "csv | doc (overrides the config)");
  app.add_flag("--quiet", quiet, "suppress progress messages");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  RunConfig cfg;
  try {
    cfg = load_run_config(config_path);
    if (!format.empty()) cfg.format = parse_format(format);
  } catch (const ParseError& e) {
    std::cerr << "heatasym: parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ValidationError& e) {
    std::cerr << "heatasym: validation error: " << e.what() << '\n';
    return kExitValidation;
  }
  if (!out_path.empty()) cfg.output = out_path;

  const int status = run(cfg, std::cout, std::cerr);
  if (!quiet && status == kExitOk && !cfg.output.empty()) {
    std::cerr << "heatasym: " << to_string(cfg.command) << " -> " << cfg.output.string() << '\n';
  }
  return status;
}

}  // namespace heatasym::cli
