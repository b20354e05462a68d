#include "geodrev/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "geodrev/config.hpp"
#include "geodrev/csv.hpp"
#include "geodrev/frames.hpp"
#include "geodrev/reversibility.hpp"

namespace geodrev {

namespace {

void print_validation(std::ostream& out, const ValidationReport& r, const FormBound& bound) {
  out << "min_margin_ec1 = " << format_report_number(r.min_margin_ec1) << '\n';
  out << "min_margin_ec2 = " << format_report_number(r.min_margin_ec2) << '\n';
  out << "min_phi = " << format_report_number(r.min_phi) << '\n';
  out << "sup_b = " << format_report_number(bound.sup_b) << " at (" << format_report_number(bound.argmax.x1) << ", "
      << format_report_number(bound.argmax.x2) << ")\n";
  out << "b_margin = " << format_report_number(bound.margin) << '\n';
  if (!r.pass) {
    out << "witness: " << r.witness_condition << " at s = " << format_report_number(r.witness_s)
        << ", b = " << format_report_number(r.witness_b) << '\n';
  }
  if (!r.error.empty()) out << "error: " << r.error << '\n';
}

// Maps library exceptions to exit codes.
int guarded(std::ostream& out, std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    err << "validation failed: " << e.what() << '\n';
    print_validation(out, e.report(), e.bound());
    return kValidationFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kConfigError;
}

std::filesystem::path reversed_path(const std::filesystem::path& p) {
  std::filesystem::path r = p;
  r.replace_filename(p.stem().string() + "_reversed.csv");
  return r;
}

void write_path(const std::filesystem::path& file, const GeodesicPath& path) {
  CsvWriter csv(file, {"step", "x1", "x2"});
  for (std::size_t i = 0; i < path.samples.size(); ++i) {
    csv.row({static_cast<double>(i), path.samples[i].x1, path.samples[i].x2});
  }
  csv.close();
}

}  // namespace

std::string format_report_number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  std::string s = buf;
  if (std::isfinite(v) && s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

int cmd_validate(const std::filesystem::path& config, std::ostream& out, std::ostream& err,
                 const std::optional<std::filesystem::path>& csv_out) {
  return guarded(out, err, [&] {
    const ExperimentConfig cfg = load_config(config);
    const PhiFunction phi = cfg.phi();
    const int grid_n = std::max(64, cfg.sampling.n_s);
    const ValidationReport report = validate_finsler(phi, grid_n);
    const FormBound bound = check_form_bound(cfg.metric(), cfg.form(), cfg.b0, cfg.sampling);

    out << "phi = " << phi.field().expr().to_string() << ", b0 = " << format_report_number(cfg.b0) << '\n';
    print_validation(out, report, bound);
    const bool pass = report.pass && bound.pass;
    out << "status: " << (pass ? "pass" : "fail") << '\n';

    if (csv_out) {
      CsvWriter csv(*csv_out, {"s", "b", "ec1_margin"});
      for (int j = 0; j < grid_n; ++j) {
        const double b = cfg.b0 * j / grid_n;
        for (int k = 0; k < grid_n; ++k) {
          const double s = -b + 2.0 * b * k / (grid_n - 1);
          try {
            const PhiJet p = phi.jet(s);
            csv.row({s, b, p.f - s * p.d1 + (b * b - s * s) * p.d2});
          } catch (const DomainError&) {
            csv.row({s, b, std::nan("")});
          }
        }
      }
      csv.close();
    }
    return pass ? kOk : kValidationFailure;
  });
}

int cmd_classify(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const MetricBundle bundle = load_config(config).bundle();
    const Classification c = classify(bundle);
    out << "verdict: " << verdict_name(c.verdict) << '\n';
    out << "class_a_shape: " << (c.class_a_shape ? "yes" : "no") << '\n';
    if (c.k2) out << "k2 = " << format_report_number(*c.k2) << '\n';
    if (!c.note.empty()) out << "note: " << c.note << '\n';
    for (const ZeroTest& z : c.evidence) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-9s max = %.6e  threshold = %.3e  %s\n", z.name.c_str(), z.max_abs,
                    z.threshold, z.zero ? "zero" : "nonzero");
      out << line;
    }
    return kOk;
  });
}

int cmd_scan(const std::filesystem::path& config, const std::string& what, const std::filesystem::path& csv_out,
             std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    if (what != "E" && what != "F" && what != "residual" && what != "crosscheck") {
      throw ConfigError("--what must be E, F, residual or crosscheck", 0);
    }
    const MetricBundle bundle = load_config(config).bundle();
    const Sampling& sm = bundle.sampling();
    const PhiFunction& phi = bundle.phi();
    std::vector<std::vector<double>> rows;
    std::vector<std::string> header;

    if (what == "E") {
      header = {"s", "E"};
      const auto s = phi.s_grid(sm.n_s);
      rows = map_over<std::vector<double>>(s.size(), [&](std::size_t i) { return std::vector{s[i], calE(phi, s[i])}; });
    } else if (what == "F") {
      header = {"b", "s", "F"};
      const auto s = phi.s_grid(sm.n_s);
      const int nb = sm.n_x1;
      std::vector<std::array<double, 2>> pts;
      for (int j = 0; j < nb; ++j) {
        const double b = phi.b0() * (j + 1) / (nb + 1);
        for (double sk : s) {
          if (std::abs(sk) <= b) pts.push_back({b, sk});
        }
      }
      rows = map_over<std::vector<double>>(pts.size(), [&](std::size_t i) {
        return std::vector{pts[i][0], pts[i][1], calF(phi, pts[i][1], pts[i][0])};
      });
    } else {
      const std::size_t nt = static_cast<std::size_t>(sm.n_t);
      const bool cross = what == "crosscheck";
      header = cross ? std::vector<std::string>{"x1", "x2", "t", "direct", "closed_form", "gap", "ratio"}
                     : std::vector<std::string>{"x1", "x2", "t", "residual"};
      rows = map_over<std::vector<double>>(bundle.grid_size() * nt, [&](std::size_t i) {
        const Point2 x = bundle.grid_point(i / nt);
        const double t = bundle.grid_angle(i % nt);
        if (!cross) return std::vector{x.x1, x.x2, t, residual(bundle, x, t)};
        const Crosscheck c = crosscheck(bundle, x, t);
        return std::vector{x.x1, x.x2, t, c.direct, c.closed_form, c.gap, c.ratio};
      });
    }

    CsvWriter csv(csv_out, header);
    for (const auto& r : rows) csv.row(r);
    csv.close();
    out << "wrote " << rows.size() << " rows to " << csv_out.string() << '\n';
    return kOk;
  });
}

int cmd_geodesic(const std::filesystem::path& config, const GeodesicOptions& opts, std::ostream& out,
                 std::ostream& err) {
  return guarded(out, err, [&] {
    const ExperimentConfig cfg = load_config(config);
    const MetricBundle bundle = cfg.bundle();
    const double T = opts.T.value_or(cfg.T);
    const double h = opts.h.value_or(cfg.h);
    if (!(T > 0.0) || !(h > 0.0)) throw ConfigError("T and h must be positive", 0);
    if (!bundle.domain().contains(opts.x0)) throw ConfigError("x0 lies outside the domain", 0);

    if (opts.y0) {
      const ReversibilityRun run = reversibility_run(bundle, opts.x0, *opts.y0, T, h);
      write_path(opts.out, run.forward);
      write_path(reversed_path(opts.out), run.backward);
      out << "reversibility_error = " << format_double(run.error) << '\n';
      if (run.truncated) {
        err << "path truncated at the domain boundary\n";
        return kTruncated;
      }
      return kOk;
    }

    const auto batch = reversibility_batch(bundle, opts.x0, cfg.seeds, T, h);
    CsvWriter csv(opts.out, {"x1", "x2", "y1", "y2", "reversibility_error", "truncated"});
    double worst = 0.0;
    bool truncated = false;
    for (const BatchEntry& e : batch) {
      csv.row({opts.x0.x1, opts.x0.x2, e.y0[0], e.y0[1], e.error, e.truncated ? 1.0 : 0.0});
      worst = std::max(worst, e.error);
      truncated = truncated || e.truncated;
    }
    csv.close();
    out << "directions = " << batch.size() << '\n';
    out << "max reversibility_error = " << format_double(worst) << '\n';
    if (truncated) {
      err << "at least one path was truncated at the domain boundary\n";
      return kTruncated;
    }
    return kOk;
  });
}

}  // namespace geodrev
