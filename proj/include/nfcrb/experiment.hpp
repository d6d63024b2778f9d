// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


#ifndef NFCRB_EXPERIMENT_HPP
#define NFCRB_EXPERIMENT_HPP

#include "array_layouts.hpp"
#include "closed_form.hpp"
#include "crb_analytic.hpp"
#include "errors.hpp"
#include "fisher_core.hpp"
#include "geometry.hpp"
#include "layout.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace nfcrb
{
    enum class Method
    {
        direct,  // exact sums over every element
        riemann, // midpoint Riemann closed forms
        oracle   // finite-difference 4x4 Fisher
    };

    inline std::string_view to_string(WavefrontModel m)
    {
        switch (m)
        {
        case WavefrontModel::sw:
            return "sw";
        case WavefrontModel::hspw:
            return "hspw";
        case WavefrontModel::pw:
            return "pw";
        }
        return "?";
    }

    inline std::string_view to_string(LayoutKind k)
    {
        switch (k)
        {
        case LayoutKind::wsms:
            return "wsms";
        case LayoutKind::ua:
            return "ua";
        case LayoutKind::dua:
            return "dua";
        }
        return "?";
    }

    inline std::string_view to_string(Method m)
    {
        switch (m)
        {
        case Method::direct:
            return "direct";
        case Method::riemann:
            return "riemann";
        case Method::oracle:
            return "oracle";
        }
        return "?";
    }

    struct ScenarioConfig
    {
        double frequency_hz = 1e11;
        double snr_db = 0.0; // transmit SNR 1/sigma_n^2
        cdouble alpha{1.0, 0.0};
        int K = 3;
        int M = 128;
        int I = 3; // D0 = 2^I lambda/2
        int N_r = 1;
        double R = 100.0;
        double vartheta = 0.0;
        double r = 10.0;
        double theta = 0.0;
        std::optional<double> d; // lambda/2 when unset, shared by TX and RX
        WavefrontModel model = WavefrontModel::sw;
        LayoutKind layout = LayoutKind::wsms;
        Method method = Method::direct;

        double lambda() const { return wavelength(frequency_hz); }
        double spacing() const { return d ? *d : lambda() / 2.0; }
        double sigma_n_sq() const { return std::pow(10.0, -snr_db / 10.0); }

        ArrayLayout array() const
        {
            const double l = lambda();
            return make_layout(layout, K, M, spacing(), inter_subarray_gap(I, l), l);
        }

        Receiver receiver() const { return {N_r, spacing()}; }
        SceneGeometry scene() const { return {R, r, theta, vartheta}; }
    };

    inline void validate(const ScenarioConfig &c)
    {
        detail::require(std::isfinite(c.frequency_hz) && c.frequency_hz > 0.0, ErrorCode::precondition,
                        "frequency_hz must be positive");
        detail::require(c.K >= 1 && c.M >= 1 && c.N_r >= 1, ErrorCode::precondition, "K, M and N_r must be at least 1");
        detail::require(c.I >= 0 && c.I <= 60, ErrorCode::precondition, "I must lie in [0, 60]");
        detail::require(std::isfinite(c.snr_db), ErrorCode::precondition, "snr_db must be finite");
        detail::require(!c.d || (std::isfinite(*c.d) && *c.d > 0.0), ErrorCode::precondition, "d must be positive");
        detail::require(std::abs(c.alpha) > 0.0, ErrorCode::precondition, "alpha must be nonzero");
    }

    // ------------------------------------------------------------------------
    // Flat key=value settings, shared by config files and command-line flags

    namespace detail
    {
        inline std::string trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return std::string(s.substr(b, e - b + 1));
        }

        inline double parse_double(const std::string &key, const std::string &v)
        {
            std::size_t pos = 0;
            double out = 0.0;
            try
            {
                out = std::stod(v, &pos);
            }
            catch (const std::exception &)
            {
                pos = 0;
            }
            if (pos == 0 || pos != v.size())
                fail(ErrorCode::precondition, "bad number for " + key + ": '" + v + "'");
            return out;
        }

        inline int parse_int(const std::string &key, const std::string &v)
        {
            int out = 0;
            const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
            if (res.ec != std::errc() || res.ptr != v.data() + v.size())
                fail(ErrorCode::precondition, "bad integer for " + key + ": '" + v + "'");
            return out;
        }
    }

    inline const std::vector<std::string> &setting_keys()
    {
        static const std::vector<std::string> keys = {"frequency_hz", "snr_db", "alpha", "K", "M", "I", "N_r", "R",
                                                      "vartheta", "r", "theta", "d", "model", "layout", "method"};
        return keys;
    }

    // alpha accepts "re" or "re,im"; method accepts "closed" for riemann
    inline void apply_setting(ScenarioConfig &c, const std::string &key, const std::string &raw)
    {
        const std::string v = detail::trim(raw);
        if (key == "frequency_hz")
            c.frequency_hz = detail::parse_double(key, v);
        else if (key == "snr_db")
            c.snr_db = detail::parse_double(key, v);
        else if (key == "alpha")
        {
            const auto comma = v.find(',');
            if (comma == std::string::npos)
                c.alpha = {detail::parse_double(key, v), 0.0};
            else
                c.alpha = {detail::parse_double(key, detail::trim(v.substr(0, comma))),
                           detail::parse_double(key, detail::trim(v.substr(comma + 1)))};
        }
        else if (key == "K")
            c.K = detail::parse_int(key, v);
        else if (key == "M")
            c.M = detail::parse_int(key, v);
        else if (key == "I")
            c.I = detail::parse_int(key, v);
        else if (key == "N_r")
            c.N_r = detail::parse_int(key, v);
        else if (key == "R")
            c.R = detail::parse_double(key, v);
        else if (key == "vartheta")
            c.vartheta = detail::parse_double(key, v);
        else if (key == "r")
            c.r = detail::parse_double(key, v);
        else if (key == "theta")
            c.theta = detail::parse_double(key, v);
        else if (key == "d")
            c.d = detail::parse_double(key, v);
        else if (key == "model")
        {
            if (v == "sw")
                c.model = WavefrontModel::sw;
            else if (v == "hspw")
                c.model = WavefrontModel::hspw;
            else if (v == "pw")
                c.model = WavefrontModel::pw;
            else
                detail::fail(ErrorCode::precondition, "model must be sw, hspw or pw");
        }
        else if (key == "layout")
        {
            if (v == "wsms")
                c.layout = LayoutKind::wsms;
            else if (v == "ua")
                c.layout = LayoutKind::ua;
            else if (v == "dua")
                c.layout = LayoutKind::dua;
            else
                detail::fail(ErrorCode::precondition, "layout must be wsms, ua or dua");
        }
        else if (key == "method")
        {
            if (v == "direct")
                c.method = Method::direct;
            else if (v == "riemann" || v == "closed")
                c.method = Method::riemann;
            else if (v == "oracle")
                c.method = Method::oracle;
            else
                detail::fail(ErrorCode::precondition, "method must be direct, riemann, closed or oracle");
        }
        else
            detail::fail(ErrorCode::precondition, "unknown setting '" + key + "'");
    }

    // Lines of key = value; '#' starts a comment
    inline void apply_config(ScenarioConfig &c, std::istream &in)
    {
        std::string line;
        int lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            const std::string t = detail::trim(line);
            if (t.empty())
                continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                detail::fail(ErrorCode::precondition, "line " + std::to_string(lineno) + ": expected key = value");
            apply_setting(c, detail::trim(t.substr(0, eq)), t.substr(eq + 1));
        }
    }

    inline void apply_config_file(ScenarioConfig &c, const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            detail::fail(ErrorCode::precondition, "cannot open config file " + path);
        apply_config(c, in);
    }

    // ------------------------------------------------------------------------
    // Point evaluation

    struct Record
    {
        std::string model, layout, method;
        int K = 0, M = 0, N_r = 0;
        std::optional<int> I; // empty for rows that do not depend on the gap
        double R = 0.0, theta = 0.0, r = 0.0;
        double crb_theta = std::numeric_limits<double>::quiet_NaN();
        double crb_r = std::numeric_limits<double>::quiet_NaN();
        std::string error_code = "ok";
    };

    namespace detail
    {
        inline Record blank_record(const ScenarioConfig &c)
        {
            Record rec;
            rec.model = std::string(to_string(c.model));
            rec.layout = std::string(to_string(c.layout));
            rec.method = std::string(to_string(c.method));
            rec.K = c.K;
            rec.M = c.M;
            rec.I = c.I;
            rec.N_r = c.N_r;
            rec.R = c.R;
            rec.theta = c.theta;
            rec.r = c.r;
            return rec;
        }

        // Joint bound, or the angle-only bound when the range carries no information
        inline void fill_from_fisher(Record &rec, const NormalizedFisher &q, double beta_sq, double sigma_n_sq)
        {
            try
            {
                const CrbResult res = crb(q, beta_sq, sigma_n_sq);
                rec.crb_theta = res.crb_theta;
                rec.crb_r = res.crb_r;
            }
            catch (const Error &e)
            {
                rec.error_code = std::string(to_string(e.code()));
                if (e.code() == ErrorCode::singular_fisher && q.q11 > 0.0 && q.q12 == 0.0)
                    rec.crb_theta = crb_theta_only(q, beta_sq, sigma_n_sq).crb_theta;
            }
        }
    }

    // Module errors land in error_code; an invalid config throws
    inline Record run_point(const ScenarioConfig &c)
    {
        validate(c);
        Record rec = detail::blank_record(c);
        try
        {
            const ArrayLayout layout = c.array();
            const SceneGeometry g = c.scene();
            const Receiver rx = c.receiver();
            const double beta_sq = received_gain(c.alpha, rx.count, layout.element_count());
            switch (c.method)
            {
            case Method::direct:
                detail::fill_from_fisher(rec, direct_fisher(c.model, layout, g, rx), beta_sq, c.sigma_n_sq());
                break;
            case Method::riemann:
            {
                if (c.model == WavefrontModel::pw)
                    detail::fail(ErrorCode::precondition, "no closed form for the PW model");
                const SumFormulas f = c.model == WavefrontModel::sw ? sw_sums_riemann(layout, g.r, g.theta)
                                                                    : hspw_sums_closed(layout, g.r, g.theta);
                detail::fill_from_fisher(rec, assemble_fisher(f, layout, g, rx), beta_sq, c.sigma_n_sq());
                break;
            }
            case Method::oracle:
            {
                const OracleResult o = full_fisher_oracle(c.model, layout, g, rx, c.alpha, c.sigma_n_sq());
                rec.crb_theta = o.crb.crb_theta;
                rec.crb_r = o.crb.crb_r;
                break;
            }
            }
        }
        catch (const Error &e)
        {
            rec.error_code = std::string(to_string(e.code()));
        }
        return rec;
    }

    // Evaluates independent points on worker threads, results in input order
    inline std::vector<Record> run_points(const std::vector<ScenarioConfig> &configs)
    {
        for (const auto &c : configs)
            validate(c);
        std::vector<Record> out(configs.size());
        const unsigned workers =
            std::max(1u, std::min(std::thread::hardware_concurrency(), static_cast<unsigned>(configs.size())));
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t i = next++; i < configs.size(); i = next++)
                out[i] = run_point(configs[i]);
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < workers; ++w)
            pool.emplace_back(work);
        work();
        for (auto &t : pool)
            t.join();
        return out;
    }

    // ------------------------------------------------------------------------
    // Sweeps

    enum class Axis
    {
        r,
        theta,
        I,
        K
    };

    struct SweepSpec
    {
        Axis axis = Axis::r;
        double start = 0.0;
        double stop = 0.0;
        int steps = 2;
        ScenarioConfig base;
    };

    // Evenly spaced grid; integer axes round each node to the nearest integer
    inline std::vector<ScenarioConfig> sweep_points(const SweepSpec &spec)
    {
        detail::require(spec.steps >= 2, ErrorCode::precondition, "a sweep needs at least 2 steps");
        detail::require(std::isfinite(spec.start) && std::isfinite(spec.stop), ErrorCode::precondition,
                        "sweep bounds must be finite");
        std::vector<ScenarioConfig> pts;
        pts.reserve(static_cast<std::size_t>(spec.steps));
        for (int i = 0; i < spec.steps; ++i)
        {
            const double v =
                i == spec.steps - 1 ? spec.stop : spec.start + (spec.stop - spec.start) * i / (spec.steps - 1);
            ScenarioConfig c = spec.base;
            switch (spec.axis)
            {
            case Axis::r:
                c.r = v;
                break;
            case Axis::theta:
                c.theta = v;
                break;
            case Axis::I:
                c.I = static_cast<int>(std::lround(v));
                break;
            case Axis::K:
                c.K = static_cast<int>(std::lround(v));
                break;
            }
            pts.push_back(c);
        }
        return pts;
    }

    inline std::vector<Record> run_sweep(const SweepSpec &spec) { return run_points(sweep_points(spec)); }

    // ------------------------------------------------------------------------
    // CSV

    inline const char *csv_header()
    {
        return "model,layout,method,K,M,I,N_r,R_m,theta_rad,r_m,crb_theta_rad2,crb_r_m2,root_crb_theta_rad,"
               "root_crb_r_m,error_code";
    }

    namespace detail
    {
        inline std::string fmt(double v)
        {
            if (std::isnan(v))
                return "nan";
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            std::ostringstream os;
            os.imbue(std::locale::classic());
            os.precision(17);
            os << v;
            return os.str();
        }
    }

    inline void write_csv_row(std::ostream &os, const Record &rec)
    {
        using detail::fmt;
        os << rec.model << ',' << rec.layout << ',' << rec.method << ',' << rec.K << ',' << rec.M << ','
           << (rec.I ? std::to_string(*rec.I) : std::string()) << ',' << rec.N_r << ',' << fmt(rec.R) << ','
           << fmt(rec.theta) << ',' << fmt(rec.r) << ',' << fmt(rec.crb_theta) << ',' << fmt(rec.crb_r) << ','
           << fmt(std::sqrt(rec.crb_theta)) << ',' << fmt(std::sqrt(rec.crb_r)) << ',' << rec.error_code << '\n';
    }

    inline void write_csv(std::ostream &os, const std::vector<Record> &rows)
    {
        os << csv_header() << '\n';
        for (const auto &rec : rows)
            write_csv_row(os, rec);
    }

    // ------------------------------------------------------------------------
    // Figure presets, 100 GHz, M = 128, d = lambda/2

    namespace detail
    {
        inline std::vector<double> linspace(double a, double b, int n)
        {
            std::vector<double> v(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                v[static_cast<std::size_t>(i)] = i == n - 1 ? b : a + (b - a) * i / (n - 1);
            return v;
        }

        // The four {I, K} cases of the wavefront-model comparison
        inline constexpr int model_cases[4][2] = {{3, 3}, {12, 3}, {3, 12}, {12, 12}};
    }

    inline const std::vector<std::string> &figure_names()
    {
        static const std::vector<std::string> names = {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
        return names;
    }

    inline std::vector<ScenarioConfig> figure_points(const std::string &name)
    {
        std::vector<ScenarioConfig> pts;
        ScenarioConfig base;
        base.M = 128;
        base.frequency_hz = 1e11;
        base.N_r = 1;

        if (name == "fig3" || name == "fig8")
        {
            // Closed form vs direct sums; fig8 is the HSPW counterpart
            base.model = name == "fig3" ? WavefrontModel::sw : WavefrontModel::hspw;
            base.I = 3;
            base.theta = pi / 4;
            for (int K : {3, 6, 9, 12})
                for (Method m : {Method::direct, Method::riemann})
                    for (double r : detail::linspace(2.0, 50.0, 25))
                    {
                        ScenarioConfig c = base;
                        c.K = K;
                        c.method = m;
                        c.r = r;
                        pts.push_back(c);
                    }
        }
        else if (name == "fig4" || name == "fig5")
        {
            const bool over_r = name == "fig4";
            for (const auto &ik : detail::model_cases)
                for (WavefrontModel m : {WavefrontModel::sw, WavefrontModel::hspw, WavefrontModel::pw})
                {
                    const auto grid = over_r ? detail::linspace(2.0, 50.0, 25) : detail::linspace(-1.5, 1.5, 61);
                    for (double v : grid)
                    {
                        ScenarioConfig c = base;
                        c.I = ik[0];
                        c.K = ik[1];
                        c.model = m;
                        c.theta = over_r ? pi / 4 : v;
                        c.r = over_r ? v : 10.0;
                        pts.push_back(c);
                    }
                }
        }
        else if (name == "fig6")
        {
            base.K = 12;
            base.I = 10;
            base.R = 31.0;
            base.theta = 0.0;
            for (int N_r : {1, 18, 35})
                for (double r : detail::linspace(1.0, 30.0, 30))
                {
                    ScenarioConfig c = base;
                    c.N_r = N_r;
                    c.r = r;
                    pts.push_back(c);
                }
        }
        else if (name == "fig7")
        {
            base.model = WavefrontModel::hspw;
            base.K = 2;
            base.N_r = 12;
            base.R = 50.0;
            base.r = 10.0;
            base.theta = 0.0;
            // Two symmetric centers carry no range information on the direct path,
            // so the closed form rows are the only ones with a joint bound
            for (Method m : {Method::direct, Method::riemann})
                for (int I = 0; I <= 20; ++I)
                {
                    ScenarioConfig c = base;
                    c.I = I;
                    c.method = m;
                    pts.push_back(c);
                }
        }
        else if (name == "fig9")
        {
            base.K = 3;
            base.r = 10.0;
            base.theta = 0.0;
            for (int I = 1; I <= 13; ++I)
                for (LayoutKind k : {LayoutKind::wsms, LayoutKind::ua, LayoutKind::dua})
                {
                    ScenarioConfig c = base;
                    c.I = I;
                    c.layout = k;
                    pts.push_back(c);
                }
        }
        else
            detail::fail(ErrorCode::precondition, "unknown figure '" + name + "'");
        return pts;
    }

    inline std::vector<Record> run_figure(const std::string &name)
    {
        std::vector<Record> rows = run_points(figure_points(name));
        if (name == "fig7")
        {
            const ScenarioConfig c = figure_points(name).front();
            const AsymptoticBounds b = hspw_crb_asymptotes(c.K, c.M, c.spacing(), c.lambda(), c.R, c.r, c.receiver(),
                                                           c.alpha, c.sigma_n_sq());
            for (const auto &[label, res] : {std::pair{"bound_lower", b.lower}, std::pair{"bound_upper", b.upper}})
            {
                Record rec = detail::blank_record(c);
                rec.method = label;
                rec.I.reset();
                rec.crb_theta = res.crb_theta;
                rec.crb_r = res.crb_r;
                rows.push_back(rec);
            }
        }
        return rows;
    }
}

#endif
