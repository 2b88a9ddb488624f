// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include "enclosure/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "enclosure/cli/config.hpp"
#include "enclosure/cli/validation.hpp"
#include "enclosure/enclosure.hpp"
#include "enclosure/error.hpp"
#include "enclosure/measurement_io.hpp"
#include "enclosure/parallel.hpp"
#include "enclosure/svg.hpp"

namespace enclosure::cli
{
namespace fs = std::filesystem;

namespace
{
std::string g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template<class F>
int guarded(std::ostream& err, F&& fn)
{
    try
    {
        return fn();
    }
    catch (InputError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }
    catch (std::invalid_argument const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }
    catch (std::exception const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

fs::path output_dir(CommandOptions const& opts, std::string const& from_config)
{
    fs::path dir = opts.out_dir.empty() ? fs::path(from_config) : fs::path(opts.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

void write_text(fs::path const& path, std::string const& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw InputError("cannot open " + path.string() + " for writing");
    os << text;
    if (!os)
        throw InputError("write to " + path.string() + " failed");
}

std::string read_text(fs::path const& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

ClassifyOptions classify_options(ReconstructBlock const& r, int alpha1, double dx)
{
    ClassifyOptions c;
    c.model = r.slope_model;
    c.dead_zone = r.dead_zone > 0 ? r.dead_zone : default_dead_zone(alpha1, dx);
    c.misfit_threshold = r.misfit_threshold;
    return c;
}

constexpr char const* indicator_header = "omega_angle,t,h,J,log_abs_I,phase,scaled_log";
}  // namespace

//---------------------------------------------------------------------------//
int cmd_synthesize(CommandOptions const& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto cfg = parse_forward_config(load_json(opts.config));
        if (!cfg.has_inclusion)
            throw InputError("synthesize needs an inclusion block in the config");
        if (opts.crime)
            cfg.solver.crime = *opts.crime;

        auto domain = cfg.domain.make();
        SynthesisOptions so;
        so.solver.tol = cfg.solver.tol;
        so.solver.max_iter = cfg.solver.max_iter;
        so.crime = cfg.solver.crime;
        so.jobs = opts.jobs;
        MeasurementDevice device(cfg.medium, domain, so);

        double delta0 = 0;
        if (cfg.solver.delta0)
        {
            delta0 = *cfg.solver.delta0;
            out << "admissible radius (configured): " << delta0 << '\n';
        }
        else
        {
            auto radius = suggest_delta0(device.solver(), cfg.solver.delta_ladder, so.solver);
            delta0 = radius.delta0;
            out << "admissible radius (empirical estimate): " << delta0 << '\n';
        }
        so.solver.delta0 = delta0;
        MeasurementDevice dev(cfg.medium, domain, so);

        int a1 = cfg.medium.params.alpha1;
        double a2 = cfg.medium.params.alpha2;
        std::vector<ProbeSpec> probes;
        int nh = static_cast<int>(cfg.probes.h_ladder.size());
        for (std::size_t d = 0; d < cfg.probes.directions.size(); ++d)
        {
            auto const& dir = cfg.probes.directions[d];
            double J = choose_J(*domain, dir, a1, a2, cfg.probes.j_margin);
            auto ts = cfg.probes.offsets(*domain, dir);
            for (std::size_t ti = 0; ti < ts.size(); ++ti)
            {
                for (int hi = 0; hi < nh; ++hi)
                {
                    int id = static_cast<int>(d) * 100000 + static_cast<int>(ti) * nh + hi;
                    probes.push_back({id, ProbeParams{dir, ts[ti], J, cfg.probes.h_ladder[hi]}});
                }
            }
        }

        auto set = dev.measure_all(probes);
        char line[256];
        for (auto const& r : set.records)
        {
            std::snprintf(line, sizeof line,
                          "probe %d angle=%.6f t=%.6f h=%.3f iterations=%d contraction=%.3e "
                          "residual=%.3e\n",
                          r.probe_id, r.params.dir.angle(), r.params.t, r.params.h,
                          r.report.iterations, r.report.contraction, r.report.residual);
            out << line;
        }
        fs::path path = opts.measurements.empty()
                            ? output_dir(opts, cfg.out_dir) / "measurements.csv"
                            : fs::path(opts.measurements);
        if (path.has_parent_path())
            fs::create_directories(path.parent_path());
        write_measurements(set, path);
        out << "wrote " << set.records.size() << " probes to " << path.string() << '\n';
        return int(exit_ok);
    });
}

//---------------------------------------------------------------------------//
namespace
{
struct OffsetGroup
{
    double t;
    std::vector<std::size_t> records;  //!< sorted by decreasing h
};

struct DirectionGroup
{
    Direction dir;
    std::vector<OffsetGroup> offsets;  //!< increasing t
};

struct DirectionOutcome
{
    std::vector<std::pair<double, std::vector<IndicatorSample>>> evaluated;
    std::optional<SupportEstimate> estimate;
    std::string error;
};

std::vector<DirectionGroup> group_records(MeasurementSet const& set)
{
    std::map<std::pair<double, double>, std::size_t> dir_index;
    std::vector<DirectionGroup> groups;
    std::vector<std::map<double, std::vector<std::size_t>>> by_t;
    for (std::size_t i = 0; i < set.records.size(); ++i)
    {
        auto const& p = set.records[i].params;
        std::pair<double, double> key{p.dir.omega().x, p.dir.omega().y};
        auto [it, inserted] = dir_index.emplace(key, groups.size());
        if (inserted)
        {
            groups.push_back({p.dir, {}});
            by_t.emplace_back();
        }
        by_t[it->second][p.t].push_back(i);
    }
    for (std::size_t g = 0; g < groups.size(); ++g)
    {
        for (auto& [t, idx] : by_t[g])
        {
            std::sort(idx.begin(), idx.end(), [&](auto a, auto b) {
                return set.records[a].params.h > set.records[b].params.h;
            });
            groups[g].offsets.push_back({t, idx});
        }
    }
    return groups;
}
}  // namespace

int cmd_reconstruct(CommandOptions const& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto cfg = parse_inverse_config(load_json(opts.config));
        if (opts.measurements.empty())
            throw InputError("reconstruct needs --measurements");
        auto set = read_measurements(fs::path(opts.measurements));
        auto cfg_domain = cfg.domain.make();
        if (!cfg_domain->same_grid(*set.domain))
            throw InputError("measurement grid does not match the config domain");
        auto background = cfg.background.build(set.domain);
        if (background.hash_hex() != set.background_hash)
        {
            throw InputError("measurement background " + set.background_hash
                             + " does not match the configured background " + background.hash_hex());
        }
        InversionEngine engine(background);
        auto copts = classify_options(cfg.reconstruct, engine.alpha1(), set.domain->spacing());
        auto groups = group_records(set);

        std::vector<DirectionOutcome> outcomes(groups.size());
        parallel_for(groups.size(), opts.jobs, [&](std::size_t g) {
            auto const& grp = groups[g];
            auto& oc = outcomes[g];
            auto classify = [&](std::size_t k) {
                std::vector<IndicatorSample> samples;
                for (auto idx : grp.offsets[k].records)
                    samples.push_back(engine.evaluate(set.records[idx]));
                auto c = classify_offset(samples, copts);
                oc.evaluated.emplace_back(grp.offsets[k].t, std::move(samples));
                return c;
            };
            try
            {
                if (cfg.reconstruct.method == "slope")
                {
                    std::vector<SlopeObservation> obs;
                    for (std::size_t k = 0; k < grp.offsets.size(); ++k)
                        obs.push_back({grp.offsets[k].t, classify(k)});
                    oc.estimate = estimate_support_slope(*set.domain, grp.dir, obs, engine.alpha1());
                }
                else
                {
                    std::vector<double> ts;
                    for (auto const& o : grp.offsets)
                        ts.push_back(o.t);
                    oc.estimate = estimate_support_grid(*set.domain, grp.dir, ts, classify);
                }
            }
            catch (std::exception const& e)
            {
                oc.error = e.what();
            }
        });

        std::vector<SupportEstimate> estimates;
        std::vector<SkippedDirection> skipped;
        for (std::size_t g = 0; g < groups.size(); ++g)
        {
            if (outcomes[g].estimate)
                estimates.push_back(*outcomes[g].estimate);
            else
                skipped.push_back({groups[g].dir, outcomes[g].error});
        }
        for (auto const& s : skipped)
            out << "skipped direction angle=" << g17(s.dir.angle()) << ": " << s.reason << '\n';
        auto rec = reconstruct(*set.domain, estimates, skipped);

        auto dir = output_dir(opts, cfg.out_dir);
        std::string ind = std::string(indicator_header) + '\n';
        for (std::size_t g = 0; g < groups.size(); ++g)
        {
            auto ev = outcomes[g].evaluated;
            std::sort(ev.begin(), ev.end(), [](auto const& a, auto const& b) { return a.first < b.first; });
            for (auto const& [t, samples] : ev)
            {
                for (auto const& s : samples)
                {
                    ind += g17(groups[g].dir.angle()) + ',' + g17(t) + ',' + g17(s.params.h) + ','
                           + g17(s.params.J) + ',' + g17(s.log_abs_I) + ',' + g17(s.phase) + ','
                           + g17(s.scaled_log) + '\n';
                }
            }
        }
        std::string sup = "omega_angle,t_star_est,confidence,method\n";
        std::vector<HalfPlane> planes;
        for (auto const& e : rec.estimates)
        {
            sup += g17(e.dir.angle()) + ',' + g17(e.t_star_est) + ',' + g17(e.confidence) + ','
                   + to_string(e.method) + '\n';
            planes.push_back({e.dir, e.t_star_est});
            char line[160];
            std::snprintf(line, sizeof line, "direction angle=%.6f t_star=%.6f confidence=%.6f\n",
                          e.dir.angle(), e.t_star_est, e.confidence);
            out << line;
        }
        std::string hull = "x,y\n";
        for (auto v : rec.hull.vertices)
            hull += g17(v.x) + ',' + g17(v.y) + '\n';

        write_text(dir / "indicators.csv", ind);
        write_text(dir / "support.csv", sup);
        write_text(dir / "hull.csv", hull);
        write_text(dir / "reconstruction.svg", svg_reconstruction(*set.domain, rec.hull, planes));
        out << "hull vertices: " << rec.hull.vertices.size() << ", area " << rec.hull.area() << '\n';
        return int(exit_ok);
    });
}

//---------------------------------------------------------------------------//
int cmd_validate(CommandOptions const& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto cfg = parse_forward_config(load_json(opts.config));
        ValidationInputs in;
        in.domain = cfg.domain.make();
        in.medium = cfg.medium;
        in.seed = opts.seed.value_or(cfg.seed);
        in.tol = cfg.solver.tol;
        in.jobs = opts.jobs;
        in.medium.build(in.domain);  // surfaces model errors as input errors
        auto results = run_validation_suites(in);
        bool ok = true;
        for (auto const& r : results)
        {
            out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
            ok = ok && r.passed;
        }
        return int(ok ? exit_ok : exit_failure);
    });
}

//---------------------------------------------------------------------------//
namespace
{
std::vector<std::string> lines_of(std::string const& text)
{
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty())
            out.push_back(line);
    }
    return out;
}

std::vector<double> parse_row(std::string const& line, std::size_t expected, fs::path const& file)
{
    std::vector<double> v;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
    {
        char* end = nullptr;
        double x = std::strtod(cell.c_str(), &end);
        if (cell.empty() || *end != '\0')
            throw InputError(file.string() + ": malformed value '" + cell + "'");
        v.push_back(x);
    }
    if (v.size() != expected)
        throw InputError(file.string() + ": expected " + std::to_string(expected) + " columns");
    return v;
}

std::string plot_one(fs::path const& file)
{
    auto lines = lines_of(read_text(file));
    if (lines.empty())
        return svg_indicator_plot({});
    if (lines[0] == "x,y")
    {
        HullPolygon hull;
        for (std::size_t i = 1; i < lines.size(); ++i)
        {
            auto r = parse_row(lines[i], 2, file);
            hull.vertices.push_back({r[0], r[1]});
        }
        return svg_hull(hull);
    }
    if (lines[0] == indicator_header)
    {
        std::vector<IndicatorPoint> pts;
        for (std::size_t i = 1; i < lines.size(); ++i)
        {
            auto r = parse_row(lines[i], 7, file);
            pts.push_back({r[1], r[2], r[6]});
        }
        return svg_indicator_plot(pts);
    }
    throw InputError(file.string() + ": unrecognized CSV header '" + lines[0] + "'");
}
}  // namespace

int cmd_plot(CommandOptions const& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (opts.inputs.empty())
            throw InputError("plot needs at least one input CSV");
        for (auto const& in : opts.inputs)
        {
            fs::path file(in);
            auto svg = plot_one(file);
            fs::path dir = opts.out_dir.empty() ? file.parent_path() : fs::path(opts.out_dir);
            if (!dir.empty())
                fs::create_directories(dir);
            fs::path target = dir / (file.stem().string() + ".svg");
            write_text(target, svg);
            out << "wrote " << target.string() << '\n';
        }
        return int(exit_ok);
    });
}

//---------------------------------------------------------------------------//
int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Enclosure-method laboratory: synthesize measurements, reconstruct inclusions"};
    app.require_subcommand(1);
    CommandOptions o;
    std::string crime;

    auto* syn = app.add_subcommand("synthesize", "Synthesize boundary measurements");
    auto* rec = app.add_subcommand("reconstruct", "Reconstruct the convex hull from measurements");
    auto* val = app.add_subcommand("validate", "Run the numerical property suites");
    auto* plot = app.add_subcommand("plot", "Render CSV outputs as SVG");

    for (auto* sc : {syn, rec, val})
    {
        sc->add_option("--config", o.config, "JSON run configuration")->required();
        sc->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
        sc->add_option("--seed", o.seed, "Seed for randomized sampling");
    }
    for (auto* sc : {syn, rec, plot})
        sc->add_option("--out-dir", o.out_dir, "Output directory");
    syn->add_option("--measurements", o.measurements, "Measurement file to write");
    syn->add_option("--crime", crime, "Synthesize on the inversion grid (on) or a finer one (off)")
        ->check(CLI::IsMember({"on", "off"}));
    rec->add_option("--measurements", o.measurements, "Measurement file to read")->required();
    plot->add_option("inputs", o.inputs, "CSV files")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        out << app.help();
        return exit_ok;
    }
    catch (CLI::CallForAllHelp const& e)
    {
        out << app.help();
        return exit_ok;
    }
    catch (CLI::ParseError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }
    if (!crime.empty())
        o.crime = crime == "on";

    if (syn->parsed())
        return cmd_synthesize(o, out, err);
    if (rec->parsed())
        return cmd_reconstruct(o, out, err);
    if (val->parsed())
        return cmd_validate(o, out, err);
    return cmd_plot(o, out, err);
}

}  // namespace enclosure::cli
