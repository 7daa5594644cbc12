#include <algorithm>
#include <cstdio>
#include <string>

#include "ptlab/cli.hpp"

// Hand-rolled JSON emission: the canonical report format pins the key
// order and prints every double as %.16e, so identical inputs give
// byte-identical reports regardless of library version.

namespace ptlab {

namespace {

class JsonWriter {
public:
    std::string take() { return std::move(out_); }

    void begin_object() {
        separate();
        out_ += '{';
        fresh_ = true;
    }
    void end_object() {
        out_ += '}';
        fresh_ = false;
    }
    void begin_array() {
        separate();
        out_ += '[';
        fresh_ = true;
    }
    void end_array() {
        out_ += ']';
        fresh_ = false;
    }

    void key(const char* k) {
        separate();
        append_string(k);
        out_ += ':';
        fresh_ = true;
    }

    void value(const std::string& s) {
        separate();
        append_string(s.c_str());
    }
    void value(const char* s) {
        separate();
        append_string(s);
    }
    void value(bool b) {
        separate();
        out_ += b ? "true" : "false";
    }
    void value(int v) {
        separate();
        out_ += std::to_string(v);
    }
    void value(double v) {
        separate();
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.16e", v);
        out_ += buf;
    }
    void value(cplx z) {
        begin_array();
        value(z.real());
        value(z.imag());
        end_array();
    }

private:
    void separate() {
        if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[' &&
            out_.back() != ':')
            out_ += ',';
        fresh_ = false;
    }

    void append_string(const char* s) {
        out_ += '"';
        for (const char* p = s; *p; ++p) {
            const unsigned char c = static_cast<unsigned char>(*p);
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\r': out_ += "\\r"; break;
                case '\t': out_ += "\\t"; break;
                default:
                    if (c < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_ += static_cast<char>(c);
                    }
            }
        }
        out_ += '"';
    }

    std::string out_;
    bool fresh_ = true;
};

void write_config(JsonWriter& w, const Config& cfg) {
    w.begin_object();
    w.key("potential_V");
    w.value(cfg.potential_v);
    w.key("potential_A");
    w.value(cfg.potential_a);
    w.key("mass");
    w.value(cfg.mass);
    w.key("half_width");
    w.value(cfg.half_width);
    w.key("grid_points");
    w.value(cfg.grid_points);
    w.key("params");
    w.begin_object();
    for (const auto& [name, val] : cfg.params) {
        w.key(name.c_str());
        w.value(val);
    }
    w.end_object();
    w.key("tolerances");
    w.begin_object();
    w.key("exact");
    w.value(cfg.tol.exact);
    w.key("pairing");
    w.value(cfg.tol.pairing);
    w.key("eigen");
    w.value(cfg.tol.eigen);
    w.key("condition_limit");
    w.value(cfg.tol.condition_limit);
    w.end_object();
    w.end_object();
}

void write_parity(JsonWriter& w, const ParityConditionReport& p) {
    w.begin_object();
    for (const ParityCondition& c : p.conditions) {
        w.key(c.name.c_str());
        w.begin_object();
        w.key("max_violation");
        w.value(c.max_violation);
        w.key("pass");
        w.value(c.pass);
        w.end_object();
    }
    w.key("pass");
    w.value(p.all_pass);
    w.end_object();
}

void write_check(JsonWriter& w, const ResidualReport& c) {
    w.begin_object();
    w.key("name");
    w.value(c.name);
    w.key("absolute");
    w.value(c.absolute);
    w.key("relative");
    w.value(c.relative);
    w.key("scale");
    w.value(c.scale);
    w.key("action_absolute");
    w.value(c.action_absolute);
    w.key("action_relative");
    w.value(c.action_relative);
    w.key("action_scale");
    w.value(c.action_scale);
    w.key("classification");
    w.value(to_string(c.classification));
    w.key("applicable");
    w.value(c.applicable);
    w.key("note");
    w.value(c.note);
    w.end_object();
}

void write_spectrum(JsonWriter& w, const SpectrumData& s) {
    w.begin_object();
    w.key("eigenvalue_count");
    w.value(static_cast<int>(s.eigenvalues.size()));
    w.key("matrix_norm");
    w.value(s.matrix_norm);
    w.key("max_residual");
    double worst = 0.0;
    for (double r : s.residuals) worst = std::max(worst, r);
    w.value(worst);
    w.key("basis_condition");
    w.value(s.basis_condition);
    w.key("basis_ill_conditioned");
    w.value(s.basis_ill_conditioned);
    w.key("pairing");
    w.begin_object();
    w.key("tolerance_abs");
    w.value(s.pairing.tolerance_abs);
    w.key("pairs");
    w.begin_array();
    for (const auto& [a, b] : s.pairing.conjugate_pairs) {
        w.begin_array();
        w.value(a);
        w.value(b);
        w.end_array();
    }
    w.end_array();
    w.key("real");
    w.begin_array();
    for (int i : s.pairing.real_indices) w.value(i);
    w.end_array();
    w.key("unmatched");
    w.begin_array();
    for (int i : s.pairing.unmatched) w.value(i);
    w.end_array();
    w.end_object();
    w.key("eigenvalues");
    w.begin_array();
    for (const cplx& z : s.eigenvalues) w.value(z);
    w.end_array();
    w.key("residuals");
    w.begin_array();
    for (double r : s.residuals) w.value(r);
    w.end_array();
    w.end_object();
}

void write_convergence(JsonWriter& w, const ConvergenceReport& c) {
    w.begin_object();
    w.key("identity");
    w.value(to_string(c.identity));
    w.key("samples");
    w.begin_array();
    for (const ConvergenceSample& s : c.samples) {
        w.begin_object();
        w.key("grid_points");
        w.value(s.n_points);
        w.key("h");
        w.value(s.h);
        w.key("max_abs_absolute");
        w.value(s.max_abs_absolute);
        w.key("max_abs_relative");
        w.value(s.max_abs_relative);
        w.key("action_absolute");
        w.value(s.action_absolute);
        w.key("action_relative");
        w.value(s.action_relative);
        w.end_object();
    }
    w.end_array();
    w.key("slope");
    w.value(c.slope);
    w.key("slope_window");
    w.begin_array();
    w.value(c.slope_min);
    w.value(c.slope_max);
    w.end_array();
    w.key("exact_short_circuit");
    w.value(c.exact_short_circuit);
    w.key("pass");
    w.value(c.pass);
    w.end_object();
}

std::string emit_json(const Report& rep) {
    JsonWriter w;
    w.begin_object();
    w.key("command");
    w.value(rep.command);
    w.key("config");
    write_config(w, rep.config);
    if (rep.parity) {
        w.key("parity_conditions");
        write_parity(w, *rep.parity);
    }
    w.key("checks");
    w.begin_array();
    for (const ResidualReport& c : rep.checks) write_check(w, c);
    w.end_array();
    if (!rep.skipped.empty()) {
        w.key("skipped");
        w.begin_array();
        for (const SkippedCheck& s : rep.skipped) {
            w.begin_object();
            w.key("name");
            w.value(s.name);
            w.key("reason");
            w.value(s.reason);
            w.end_object();
        }
        w.end_array();
    }
    if (rep.spectrum) {
        w.key("spectrum");
        write_spectrum(w, *rep.spectrum);
    }
    if (rep.convergence) {
        w.key("convergence");
        write_convergence(w, *rep.convergence);
    }
    w.key("verdict");
    w.value(rep.verdict);
    w.end_object();
    std::string out = w.take();
    out += '\n';
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

std::string emit_text(const Report& rep) {
    std::string out;
    out += "ptlab " + rep.command + "\n";
    out += "  V = \"" + rep.config.potential_v + "\", A = \"" + rep.config.potential_a +
           "\", m = " + fmt(rep.config.mass) + ", L = " + fmt(rep.config.half_width) +
           ", N = " + std::to_string(rep.config.grid_points) + "\n";
    if (rep.parity) {
        out += std::string("  parity conditions: ") + (rep.parity->all_pass ? "pass" : "FAIL");
        for (const ParityCondition& c : rep.parity->conditions)
            out += "  " + c.name + " " + fmt(c.max_violation);
        out += "\n";
    }
    for (const ResidualReport& c : rep.checks) {
        out += "  " + c.name;
        out.append(c.name.size() < 22 ? 22 - c.name.size() : 1, ' ');
        out += std::string(to_string(c.classification));
        out += "  rel " + fmt(c.relative) + "  abs " + fmt(c.absolute);
        if (!c.applicable) out += "  [not applicable]";
        out += "\n";
    }
    for (const SkippedCheck& s : rep.skipped)
        out += "  " + s.name + " skipped: " + s.reason + "\n";
    if (rep.spectrum) {
        const SpectrumData& s = *rep.spectrum;
        out += "  eigenvalues: " + std::to_string(s.eigenvalues.size()) +
               ", conjugate pairs: " + std::to_string(s.pairing.conjugate_pairs.size()) +
               ", real: " + std::to_string(s.pairing.real_indices.size()) +
               ", unmatched: " + std::to_string(s.pairing.unmatched.size()) + "\n";
        double worst = 0.0;
        for (double r : s.residuals) worst = std::max(worst, r);
        out += "  max residual " + fmt(worst) + ", basis condition " + fmt(s.basis_condition) +
               "\n";
    }
    if (rep.convergence) {
        const ConvergenceReport& c = *rep.convergence;
        out += "  convergence of " + std::string(to_string(c.identity)) + ":\n";
        for (const ConvergenceSample& s : c.samples)
            out += "    N = " + std::to_string(s.n_points) + "  h = " + fmt(s.h) +
                   "  action rel = " + fmt(s.action_relative) + "  max-abs rel = " +
                   fmt(s.max_abs_relative) + "\n";
        if (c.exact_short_circuit)
            out += "    exact at every size (short circuit)\n";
        else
            out += "    slope " + fmt(c.slope) + " (window [" + fmt(c.slope_min) + ", " +
                   fmt(c.slope_max) + "])\n";
    }
    out += "  verdict: " + rep.verdict + "\n";
    return out;
}

}  // namespace

std::string spectrum_csv(const Report& rep) {
    if (!rep.spectrum) throw ConfigError("csv format is only available for spectrum reports");
    const SpectrumData& s = *rep.spectrum;
    const int n = static_cast<int>(s.eigenvalues.size());
    // -1: real/self-paired, -2: unmatched.
    std::vector<int> partner(n, -2);
    for (int i : s.pairing.real_indices) partner[i] = -1;
    for (const auto& [a, b] : s.pairing.conjugate_pairs) {
        partner[a] = b;
        partner[b] = a;
    }
    std::string out = "index,eigenvalue_re,eigenvalue_im,residual,pairing_partner_index\n";
    char buf[144];
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.16e,%.16e,%.16e,%d\n", i, s.eigenvalues[i].real(),
                      s.eigenvalues[i].imag(), s.residuals[i], partner[i]);
        out += buf;
    }
    return out;
}

std::string emit_report(const Report& rep, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: return emit_json(rep);
        case ReportFormat::Text: return emit_text(rep);
        case ReportFormat::Csv: return spectrum_csv(rep);
    }
    throw Error("unknown report format");
}

}  // namespace ptlab
