#include "orbq/cli/report.hpp"

#include <fmt/format.h>

namespace orbq::cli
{

namespace
{

std::string power(const Rational &e)
{
    if (e == 1)
        return "q";
    std::string s = to_string(e);
    return s.size() == 1 ? "q^" + s : "q^{" + s + "}";
}

} // namespace

std::string format_character(const PuiseuxSeries &ch, long c)
{
    Rational shift = make_rational(c, 24);
    std::string out;
    bool started = false;
    Rational start = -shift;
    for (Rational e = start; ch.trunc() && e < *ch.trunc(); e += 1) {
        Cyclotomic v = ch.coefficient(e);
        std::string coef = v.to_string();
        if (!started && v.is_zero())
            continue;
        std::string term;
        if (e == 0)
            term = coef;
        else if (coef == "1")
            term = power(e);
        else
            term = coef + power(e);
        if (started) {
            if (!term.empty() && term[0] == '-')
                out += " - " + term.substr(1);
            else
                out += " + " + term;
        } else {
            out = term;
        }
        started = true;
    }
    if (ch.trunc())
        out += (started ? " + O(" : "O(") + power(*ch.trunc()) + ")";
    return out;
}

std::string report_text(const OrbifoldReport &r, const RunContext &ctx)
{
    std::string s;
    s += fmt::format("lattice: {}\n", ctx.lattice);
    s += fmt::format("automorphism: {}\n", ctx.automorphism);
    if (!ctx.beta.empty())
        s += fmt::format("beta: {}\n", ctx.beta);
    s += fmt::format("central charge: {}\n", r.central_charge);
    s += fmt::format("cycle type: {}\n", r.cycle.to_string());
    s += fmt::format("lift: {}, order {}\n", r.classification, r.hat_order);
    s += fmt::format("conformal weight: {}, type {}\n", to_string(r.conformal_weight), r.type);
    s += fmt::format("character: {}\n", format_character(r.character, r.central_charge));
    s += "dims:";
    for (const auto &[k, v] : r.dims)
        s += fmt::format(" V{}={}", k, v.get_str());
    s += "\ntwisted sector weights:";
    for (const auto &p : r.pieces) {
        auto it = r.sector_weights.find(p.t);
        if (it != r.sector_weights.end())
            s += fmt::format(" t={}:{}", p.t, to_string(it->second));
        else
            s += fmt::format(" t={}:>={}", p.t, r.trunc_weight);
    }
    s += "\n";
    for (const auto &p : r.pieces)
        s += fmt::format("C_{}: level {}, weight {}, character {}, basis {}, cosets {}\n", p.t, p.space.level,
                         p.space.weight, p.space.character, p.space.basis.size(), p.cosets);
    return s;
}

nlohmann::json report_json(const OrbifoldReport &r, const RunContext &ctx)
{
    nlohmann::json j;
    j["lattice"] = ctx.lattice;
    j["automorphism"] = ctx.automorphism;
    if (!ctx.beta.empty())
        j["beta"] = ctx.beta;
    j["central_charge"] = r.central_charge;
    j["cycle_type"] = r.cycle.to_string();
    j["classification"] = r.classification;
    j["hat_order"] = r.hat_order;
    j["type"] = r.type;
    j["trunc_weight"] = r.trunc_weight;
    j["character"] = format_character(r.character, r.central_charge);
    nlohmann::json dims = nlohmann::json::object();
    for (const auto &[k, v] : r.dims)
        dims[std::to_string(k)] = v.get_str();
    j["dims"] = dims;
    nlohmann::json coeffs = nlohmann::json::object();
    for (const auto &[e, v] : r.character.terms())
        coeffs[to_string(e)] = v.to_string();
    j["character_coefficients"] = coeffs;
    nlohmann::json weights = nlohmann::json::object();
    weights["untwisted"] = "0";
    weights["lift"] = to_string(r.conformal_weight);
    for (const auto &p : r.pieces) {
        auto it = r.sector_weights.find(p.t);
        // null: the sector starts at or above the truncation weight
        weights["t=" + std::to_string(p.t)] =
            it == r.sector_weights.end() ? nlohmann::json(nullptr) : nlohmann::json(to_string(it->second));
    }
    j["conformal_weights"] = weights;
    nlohmann::json pieces = nlohmann::json::array();
    for (const auto &p : r.pieces) {
        nlohmann::json q;
        q["t"] = p.t;
        q["level"] = p.space.level;
        q["weight"] = p.space.weight;
        q["character"] = p.space.character;
        std::vector<std::string> basis, cs;
        for (const auto &b : p.space.basis)
            basis.push_back(b.to_string());
        for (const auto &c : p.coefficients)
            cs.push_back(to_string(c));
        q["basis"] = basis;
        q["coefficients"] = cs;
        q["cosets"] = p.cosets;
        pieces.push_back(q);
    }
    j["pieces"] = pieces;
    return j;
}

} // namespace orbq::cli
