// Copyright 2026 The dbgas Authors. - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef DBGAS_CLI_HPP
#define DBGAS_CLI_HPP

// Batch driver behind the `dbgas` executable. run_cli() is callable
// in-process; it never calls exit().

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dbgas/config.hpp"
#include "dbgas/csv.hpp"
#include "dbgas/errors.hpp"
#include "dbgas/mollified.hpp"
#include "dbgas/motion.hpp"
#include "dbgas/selftest.hpp"
#include "dbgas/series.hpp"

namespace dbgas {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

struct CommandOutput {
  CsvTable table;
  std::string summary;
  bool ok = true;  // false: numerical failure (selftest)
};

inline const char* cli_schema_help() {
  return R"(Output (CSV, header row, 17 significant digits):
  series     kind,m,sequence,mean,std_error,n_samples,min_sample,max_sample
             one 'term' row per diagram sequence (m = 0 is the free term,
             sequences written as (2,1)-(3,2)), then one 'total' row.
  mollified  eps,h,steps,mean,std_error,n_samples,lambda,beta
  sweep      eps,h,steps,mean,std_error,n_samples,lambda,beta (one row per eps)
             lambda and beta refer to the first pair (2,1).
  drift      mode = grid: x,y,b1x,b1y,...,bNx,bNy; particle `label` (default N)
             is placed at (x, y), the others stay at z0; nan where the drift
             is singular.
             mode = path: step,time,x1,y1,...,xN,yN for one Euler path of the
             many-delta drift on [0, t], stopped once a pair distance
             |Z^j| <= eta_stop.
  selftest   check,status,detail (status PASS or FAIL)

Exit codes: 0 success, 1 invalid input, 2 numerical or I/O failure.

Config: `key = value` lines, optional [system] [coupling] [run] [mollified]
[drift] sections, '#' comments. Required: N, t, z0 (2N reals).)";
}

namespace detail {

inline CsvRow estimate_cells(const Estimate& e) {
  return {e.mean, e.std_error, static_cast<std::uint64_t>(e.n_samples), e.min_sample, e.max_sample};
}

inline CommandOutput run_series_command(const RunConfig& c) {
  SeriesOptions o;
  o.run.threads = c.threads;
  o.sampling = c.sampling;
  const auto r = series_eval(c.coupling(), c.initial(), c.t, c.make_observable(), c.m_max, c.n_samples, c.seed, o);
  CommandOutput out;
  out.table.header = {"kind", "m", "sequence", "mean", "std_error", "n_samples", "min_sample", "max_sample"};
  for (const auto& row : r.terms) {
    CsvRow cells{std::string("term"), static_cast<std::int64_t>(row.m), sequence_to_string(row.sequence)};
    for (auto& x : estimate_cells(row.estimate)) cells.push_back(x);
    out.table.rows.push_back(std::move(cells));
  }
  out.table.rows.push_back(CsvRow{std::string("total"), static_cast<std::int64_t>(r.truncation.last_m), std::string(""),
                                  r.total.mean, r.total.std_error, static_cast<std::uint64_t>(c.n_samples), r.total.min_sample,
                                  r.total.max_sample});
  std::ostringstream s;
  s << "series total " << format_real(r.total.mean) << " +- " << format_real(r.total.std_error) << " ("
    << r.terms.size() << " terms, m <= " << r.truncation.last_m << ")\n";
  if (r.truncation.exhausted) {
    s << "truncation: exact, no sequences beyond m = " << r.truncation.last_m << "\n";
  } else {
    s << "truncation: last layer " << format_real(r.truncation.last_layer) << ", ratio "
      << format_real(r.truncation.ratio) << ", geometric tail bound " << format_real(r.truncation.geometric_bound)
      << "\n";
  }
  out.summary = s.str();
  return out;
}

inline std::vector<std::string> fk_header() {
  return {"eps", "h", "steps", "mean", "std_error", "n_samples", "lambda", "beta"};
}

inline CsvRow fk_row(const SweepRow& r, double t) {
  return {r.eps,
          r.h,
          static_cast<std::uint64_t>(fk_step_count(t, r.h)),
          r.estimate.mean,
          r.estimate.std_error,
          static_cast<std::uint64_t>(r.estimate.n_samples),
          r.lambda,
          r.beta};
}

inline CommandOutput run_mollified_command(const RunConfig& c) {
  const auto params = c.coupling();
  FkOptions o;
  o.run.threads = c.threads;
  const double h = c.h > 0.0 ? c.h : max_step_for(c.eps);
  SweepRow row;
  row.eps = c.eps;
  row.h = h;
  row.estimate = occupation_fk_estimate(params, c.eps, c.initial(), c.t, c.make_observable(), h, c.n_samples, c.seed, o);
  row.lambda = params.lambda(std::size_t{0});
  row.beta = params.beta(std::size_t{0});
  CommandOutput out;
  out.table.header = fk_header();
  out.table.rows.push_back(fk_row(row, c.t));
  out.summary = "mollified eps " + format_real(c.eps) + ": " + format_real(row.estimate.mean) + " +- " +
                format_real(row.estimate.std_error) + "\n";
  return out;
}

inline CommandOutput run_sweep_command(const RunConfig& c) {
  SweepOptions o;
  o.run.threads = c.threads;
  o.common_random_numbers = c.common_random_numbers;
  o.h = c.h;
  const auto rows = epsilon_sweep(c.coupling(), c.initial(), c.t, c.make_observable(), c.eps_list, c.n_samples, c.seed, o);
  CommandOutput out;
  out.table.header = fk_header();
  std::ostringstream s;
  for (const auto& r : rows) {
    out.table.rows.push_back(fk_row(r, c.t));
    s << "eps " << format_real(r.eps) << ": " << format_real(r.estimate.mean) << " +- "
      << format_real(r.estimate.std_error) << "\n";
  }
  out.summary = s.str();
  return out;
}

inline CommandOutput run_drift_command(const RunConfig& c) {
  const auto params = c.coupling();
  const auto z0 = c.initial();
  CommandOutput out;
  if (c.drift_mode == DriftMode::kPath) {
    const auto path = sample_path(z0, params, c.path_h, c.t, c.eta_stop, c.seed);
    out.table = path_to_csv(path);
    std::ostringstream s;
    s << "path: " << path.steps() << " steps";
    if (path.stopped_at) {
      s << ", stopped at t = " << format_real(path.stop_time()) << " by pair " << to_string(path.stopped_at->pair);
    }
    out.summary = s.str() + "\n";
    return out;
  }
  const int label = c.grid_label > 0 ? c.grid_label : c.n;
  out.table.header = {"x", "y"};
  for (int k = 1; k <= c.n; ++k) {
    out.table.header.push_back("b" + std::to_string(k) + "x");
    out.table.header.push_back("b" + std::to_string(k) + "y");
  }
  const auto res = static_cast<std::size_t>(c.resolution);
  std::vector<CsvRow> rows(res * res);
  parallel_for(res, c.threads, [&](std::uint64_t iy) {
    const double y = c.y_min + (c.y_max - c.y_min) * static_cast<double>(iy) / static_cast<double>(res - 1);
    for (std::size_t ix = 0; ix < res; ++ix) {
      const double x = c.x_min + (c.x_max - c.x_min) * static_cast<double>(ix) / static_cast<double>(res - 1);
      std::vector<Point> pts(z0.points().begin(), z0.points().end());
      pts[static_cast<std::size_t>(label - 1)] = {x, y};
      const Configuration z(pts);
      CsvRow row{x, y};
      if (is_separated(z, kSeparationTol)) {
        for (const auto& b : particle_drift(z, params)) {
          row.emplace_back(b.x);
          row.emplace_back(b.y);
        }
      } else {
        for (int k = 0; k < 2 * c.n; ++k) row.emplace_back(std::nan(""));
      }
      rows[iy * res + ix] = std::move(row);
    }
  });
  out.table.rows = std::move(rows);
  out.summary = "drift grid: " + std::to_string(res * res) + " points, particle " + std::to_string(label) + " moved\n";
  return out;
}

inline CommandOutput run_selftest_command(unsigned threads) {
  CommandOutput out;
  out.table.header = {"check", "status", "detail"};
  std::ostringstream s;
  std::size_t failed = 0;
  for (const auto& r : run_selftest(threads)) {
    out.table.rows.push_back(CsvRow{r.name, std::string(r.passed ? "PASS" : "FAIL"), r.detail});
    s << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    failed += !r.passed;
  }
  s << (failed == 0 ? "selftest: all checks passed\n" : "selftest: " + std::to_string(failed) + " check(s) failed\n");
  out.summary = s.str();
  out.ok = failed == 0;
  return out;
}

}  // namespace detail

/// Runs one subcommand. CSV goes to --out (or the config's `out`) when given,
/// otherwise to `out`; the human-readable summary goes to `out` when the CSV
/// is written to a file and to `err` otherwise. Returns the exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"dbgas: many-body delta-Bose gas semigroup estimators", "dbgas"};
  app.footer(cli_schema_help());
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out_path;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "Configuration file");
    if (needs_config) opt->required();
    sub->add_option("--seed", seed, "Root seed (overrides the config)");
    sub->add_option("--out", out_path, "CSV output path (default: stdout)");
    sub->add_option("--threads", threads, "Worker threads (overrides the config)")->check(CLI::Range(1u, 1024u));
  };
  auto* series = app.add_subcommand("series", "Diagram series: per-term CSV and truncated sum");
  auto* mollified = app.add_subcommand("mollified", "Mollified Feynman-Kac estimate at one eps");
  auto* sweep = app.add_subcommand("sweep", "Mollified Feynman-Kac estimates over eps_list");
  auto* drift = app.add_subcommand("drift", "Many-delta drift field on a grid, or one Euler path");
  auto* selftest = app.add_subcommand("selftest", "Module invariant checks (PASS/FAIL per check)");
  for (auto* s : {series, mollified, sweep, drift}) add_common(s, true);
  add_common(selftest, false);
  for (auto* s : {series, mollified, sweep, drift, selftest}) s->footer(cli_schema_help());

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  }

  try {
    CommandOutput result;
    std::string target = out_path;
    if (selftest->parsed()) {
      unsigned th = threads.value_or(1);
      if (!config_path.empty()) {
        const auto c = load_config(config_path, false);
        th = threads.value_or(c.threads);
        if (target.empty()) target = c.out;
      }
      result = detail::run_selftest_command(th);
    } else {
      RunConfig c = load_config(config_path);
      if (seed) c.seed = *seed;
      if (threads) c.threads = *threads;
      if (target.empty()) target = c.out;
      if (series->parsed()) {
        result = detail::run_series_command(c);
      } else if (mollified->parsed()) {
        result = detail::run_mollified_command(c);
      } else if (sweep->parsed()) {
        result = detail::run_sweep_command(c);
      } else {
        result = detail::run_drift_command(c);
      }
    }
    if (target.empty()) {
      write_csv(out, result.table);
      err << result.summary;
    } else {
      write_csv(target, result.table);
      out << result.summary;
    }
    return result.ok ? kExitOk : kExitNumerical;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "numerical or I/O error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run_cli(args, out, err);
}

}  // namespace dbgas

#endif  // DBGAS_CLI_HPP
