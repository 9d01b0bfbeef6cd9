#include "markovforge/spectrum_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace markovforge {

namespace {

using Json = nlohmann::ordered_json;

Json interval_exact(const CReal& x) {
    const CReal y = x.rounded(x.precision_bits());
    return Json{{"lo", y.lo().exact_decimal()}, {"hi", y.hi().exact_decimal()}, {"bits", y.precision_bits()}};
}

CReal interval_exact(const Json& j) {
    const auto bits = j.at("bits").get<Bits>();
    if (bits < MPFR_PREC_MIN || bits > 1 << 20) throw FormatError("interval precision out of range");
    return CReal::from_bounds(BigFloat::parse_exact(j.at("lo").get<std::string>(), bits),
                              BigFloat::parse_exact(j.at("hi").get<std::string>(), bits));
}

Json interval_report(const CReal& x, int digits = 30) { return Json{{"lo", x.lo_string(digits)}, {"hi", x.hi_string(digits)}}; }

Json big_list(const std::vector<BigInt>& values) {
    Json out = Json::array();
    for (std::size_t n = 1; n < values.size(); ++n) out.push_back(values[n].get_str());
    return out;
}

BigInt parse_big(const Json& j) {
    const std::string text = j.is_string() ? j.get<std::string>() : j.dump();
    BigInt value;
    if (text.empty() || value.set_str(text, 10) != 0) throw FormatError("not an integer: '" + text + "'");
    return value;
}

std::vector<BigInt> big_list(const Json& j) {
    std::vector<BigInt> out{BigInt(0)};
    for (const auto& item : j) out.push_back(parse_big(item));
    return out;
}

Json beta_json(const BetaValue& beta) {
    switch (beta.kind()) {
        case BetaValue::Kind::Rational:
            return Json{{"kind", "rational"}, {"value", beta.operand().get_str()}};
        case BetaValue::Kind::ExpOfRational:
            return Json{{"kind", "exp"}, {"exponent", beta.operand().get_str()}};
        case BetaValue::Kind::Decimal:
            return Json{{"kind", "decimal"}, {"value", beta.literal()}};
    }
    throw std::logic_error("unreachable");
}

BetaValue beta_from_json(const Json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "rational") return BetaValue::rational(parse_rational(j.at("value").get<std::string>()));
    if (kind == "exp") return BetaValue::exp_of_rational(parse_rational(j.at("exponent").get<std::string>()));
    if (kind == "decimal") return BetaValue::decimal(j.at("value").get<std::string>());
    throw FormatError("unknown beta kind '" + kind + "'");
}

}  // namespace

std::string write_spectrum_file(const SpectrumFile& file) {
    const LoopSpectrum& s = file.spectrum;
    const SpectrumMeta& meta = s.meta;
    Json doc;
    doc["format_version"] = file.format_version;
    doc["beta"] = meta.beta ? beta_json(*meta.beta) : Json(nullptr);
    doc["entropy_target"] = file.entropy_target ? Json(*file.entropy_target) : Json(nullptr);
    doc["period_lift"] = file.period_lift;
    doc["growth_model"] = to_string(meta.model);
    doc["N_max"] = s.n_max();
    doc["a"] = big_list(s.a);
    Json m;
    if (meta.model == GrowthModel::Constructed) {
        m["precision_bits"] = meta.precision_bits;
        m["beta_value"] = interval_exact(meta.beta_value);
        m["c"] = interval_exact(meta.c);
        m["delta"] = interval_exact(meta.delta);
        m["k"] = meta.k.get_str();
        m["M"] = interval_exact(meta.M);
        m["L"] = interval_exact(meta.L);
        m["tail_mass"] = interval_exact(meta.tail_mass);
    }
    m["deleted_loop"] = meta.deleted_loop ? Json(*meta.deleted_loop) : Json(nullptr);
    doc["meta"] = m;
    if (meta.model == GrowthModel::Constructed)
        doc["digit_trace"] = Json{{"b", big_list(s.trace.b)}, {"d", big_list(s.trace.d)}, {"d_prime", big_list(s.trace.d_prime)}};
    return doc.dump(2) + "\n";
}

SpectrumFile read_spectrum_file(const std::string& text) {
    try {
        const Json doc = Json::parse(text);
        SpectrumFile file;
        file.format_version = doc.value("format_version", 0);
        if (file.format_version != kSpectrumFormatVersion)
            throw FormatError("unsupported format_version " + std::to_string(file.format_version));
        if (doc.contains("entropy_target") && !doc["entropy_target"].is_null())
            file.entropy_target = doc["entropy_target"].get<std::string>();
        file.period_lift = doc.value("period_lift", std::size_t{1});
        if (file.period_lift < 1) throw FormatError("period_lift must be >= 1");

        LoopSpectrum& s = file.spectrum;
        SpectrumMeta& meta = s.meta;
        meta.model = growth_model_from_string(doc.value("growth_model", std::string("finite")));
        s.a = big_list(doc.at("a"));
        for (std::size_t n = 1; n < s.a.size(); ++n)
            if (s.a[n] < 0) throw FormatError("negative loop count");
        if (doc.contains("N_max") && doc["N_max"].get<std::size_t>() != s.n_max())
            throw FormatError("N_max disagrees with the length of a");
        if (doc.contains("beta") && !doc["beta"].is_null()) meta.beta = beta_from_json(doc["beta"]);

        const Json m = doc.value("meta", Json::object());
        if (m.contains("deleted_loop") && !m["deleted_loop"].is_null())
            meta.deleted_loop = m["deleted_loop"].get<std::size_t>();
        if (meta.model == GrowthModel::Constructed) {
            if (!meta.beta) throw FormatError("constructed spectrum without beta");
            meta.precision_bits = m.at("precision_bits").get<Bits>();
            meta.beta_value = interval_exact(m.at("beta_value"));
            meta.c = interval_exact(m.at("c"));
            meta.delta = interval_exact(m.at("delta"));
            meta.k = parse_big(m.at("k"));
            meta.M = interval_exact(m.at("M"));
            meta.L = interval_exact(m.at("L"));
            meta.tail_mass = interval_exact(m.at("tail_mass"));
            const Json& trace = doc.at("digit_trace");
            s.trace.b = big_list(trace.at("b"));
            s.trace.d = big_list(trace.at("d"));
            s.trace.d_prime = big_list(trace.at("d_prime"));
            if (s.trace.b.size() != s.a.size() || s.trace.d.size() != s.a.size() || s.trace.d_prime.size() != s.a.size())
                throw FormatError("digit_trace lengths disagree with a");
            if (s.n_max() < 1 || s.a[1] != 1) throw FormatError("constructed spectrum must have a(1) = 1");
        }
        return file;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("spectrum JSON: ") + e.what());
    }
}

SpectrumFile load_spectrum_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return read_spectrum_file(buffer.str());
}

void save_spectrum_file(const SpectrumFile& file, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << write_spectrum_file(file);
    if (!out) throw FormatError("write to '" + path + "' failed");
}

std::string report_to_json(const ClassificationReport& report, bool entropy_in_bits) {
    Json doc;
    doc["verdict"] = to_string(report.verdict);
    doc["period_lift"] = report.period_lift;
    doc["L"] = report.L.infinite() ? Json("inf") : interval_report(*report.L.value);
    doc["L_certified"] = report.L.certified;
    doc["R"] = report.R ? interval_report(*report.R) : Json(nullptr);
    doc["F_at_L"] = report.F_at_L ? interval_report(*report.F_at_L) : Json(nullptr);
    doc["F_at_R"] = report.F_at_R ? interval_report(*report.F_at_R) : Json(nullptr);
    doc["mean_return_bound"] = report.mean_return_bound ? interval_report(*report.mean_return_bound) : Json(nullptr);
    if (report.entropy) {
        CReal h = *report.entropy;
        if (entropy_in_bits) h = h / log(CReal::from_integer(2L, h.precision_bits()));
        Json e = interval_report(h);
        e["unit"] = entropy_in_bits ? "bit" : "nat";
        doc["entropy"] = e;
    } else {
        doc["entropy"] = nullptr;
    }
    doc["has_mme"] = report.has_mme ? Json(*report.has_mme) : Json(nullptr);
    if (report.lambda_estimate) {
        Json l = interval_report(*report.lambda_estimate, 12);
        l["certified"] = false;
        doc["lambda_estimate"] = l;
    } else {
        doc["lambda_estimate"] = nullptr;
    }
    doc["notes"] = report.notes;
    return doc.dump(2) + "\n";
}

}  // namespace markovforge
