#include "nf/pretty.hpp"

#include <map>
#include <sstream>

namespace nf {

namespace {

std::string field_text(FieldLabel f, PrintStyle st) {
    if (st == PrintStyle::laplacian) return label_name(f);
    switch (f) {
        case FieldLabel::psi: return "\\psi";
        case FieldLabel::psi_star: return "\\psi^*";
        case FieldLabel::phi: return "\\phi";
        case FieldLabel::pphi: return "p_\\phi";
    }
    return "?";
}

// one decorated factor: lap^a(f), possibly capped by a gradient
std::string decorated(FieldLabel f, int lap_pow, bool grad, PrintStyle st) {
    std::string core = field_text(f, st);
    if (st == PrintStyle::laplacian) {
        for (int i = 0; i < lap_pow; ++i) core = "lap(" + core + ")";
        if (grad) core = "grad(" + core + ")";
    } else {
        for (int i = 0; i < lap_pow; ++i) core = "\\Delta " + core;
        if (grad) core = "\\nabla " + core;
    }
    return core;
}

std::string coeff_text(const ExactComplex& c, PrintStyle st) {
    if (st == PrintStyle::laplacian) {
        std::string s = c.to_string();
        if (!c.re.is_zero() && !c.im.is_zero()) return "(" + s + ")";
        return s;
    }
    auto frac = [](const Rational& q, bool imag) {
        std::string num = q.num().abs().to_string();
        if (imag) num = (num == "1") ? "i" : num + "i";
        std::string body =
            q.is_integer() ? num : "\\frac{" + num + "}{" + q.den().to_string() + "}";
        return std::string(q.num().is_negative() ? "-" : "") + body;
    };
    if (c.im.is_zero()) return frac(c.re, false);
    if (c.re.is_zero()) return frac(c.im, true);
    std::string s = frac(c.re, false);
    std::string i = frac(c.im, true);
    if (i[0] != '-') s += "+";
    return "\\left(" + s + i + "\\right)";
}

struct RenderedPiece {
    ExactComplex coeff;
    std::string body;
};

// Render one kernel monomial of one term into a decorated field product.
RenderedPiece render_monomial(const Term& t, const KPoly::Monomial& mono, const ExactComplex& mc,
                              PrintStyle st) {
    const int m = static_cast<int>(t.factors.size());
    std::map<int, int> diag;        // factor -> laplacian power
    std::map<int, int> grad_with;   // factor -> paired factor
    std::vector<KVar> fallback;     // anything not renderable
    int sign_flips = 0;

    std::map<KVar, int> powers;
    for (KVar v : mono) powers[v]++;

    // two-factor kernels reduce to powers of d(1,1); split them across the
    // pair in the conventional display (Delta psi)^2, (grad psi)^2, ...
    if (m == 2 && powers.size() == 1 && powers.begin()->first == kvar(1, 1)) {
        int e = powers.begin()->second;
        int a = e / 2;
        bool odd = (e % 2) != 0;
        std::string f1 = decorated(t.factors[0].field, a, odd, st);
        std::string f2 = decorated(t.factors[1].field, a, odd, st);
        std::string body;
        if (odd) {
            body = (st == PrintStyle::laplacian) ? f1 + "." + f2 : f1 + " \\cdot " + f2;
        } else if (t.factors[0].field == t.factors[1].field && a > 0) {
            body = (st == PrintStyle::laplacian) ? f1 + "^2" : "(" + f1 + ")^2";
        } else if (t.factors[0].field == t.factors[1].field) {
            body = (st == PrintStyle::laplacian)
                       ? std::string(field_text(t.factors[0].field, st)) + "^2"
                       : field_text(t.factors[0].field, st) + "^2";
        } else {
            body = f1 + " " + f2;
        }
        return {t.coeff * mc, body};
    }

    for (auto& [v, e] : powers) {
        int i = kvar_lo(v), j = kvar_hi(v);
        if (i == j) {
            diag[i] += e;
            sign_flips += e;
        } else if (e == 1 && !grad_with.count(i) && !grad_with.count(j)) {
            grad_with[i] = j;
            grad_with[j] = i;
            sign_flips += 1;
        } else {
            for (int r = 0; r < e; ++r) fallback.push_back(v);
        }
    }

    std::ostringstream body;
    bool first = true;
    auto emit = [&](const std::string& s) {
        if (!first) body << " ";
        body << s;
        first = false;
    };
    for (KVar v : fallback) {
        emit("[k" + std::to_string(kvar_lo(v)) + ".k" + std::to_string(kvar_hi(v)) + "]");
    }

    std::vector<bool> done(m + 1, false);
    for (int i = 1; i <= m; ++i) {
        if (done[i]) continue;
        FieldLabel f = t.factors[i - 1].field;
        int lap_pow = diag.count(i) ? diag[i] : 0;
        if (grad_with.count(i)) {
            int j = grad_with[i];
            done[j] = true;
            int lap_j = diag.count(j) ? diag[j] : 0;
            std::string a = decorated(f, lap_pow, true, st);
            std::string b = decorated(t.factors[j - 1].field, lap_j, true, st);
            emit(st == PrintStyle::laplacian ? a + "." + b : a + " \\cdot " + b);
            continue;
        }
        if (lap_pow > 0) {
            // collect equal undecorated runs below; decorated factors print singly
            emit(st == PrintStyle::laplacian ? decorated(f, lap_pow, false, st)
                                             : "(" + decorated(f, lap_pow, false, st) + ")");
            continue;
        }
        // plain field: group identical plain neighbours into a power
        int count = 1;
        for (int j = i + 1; j <= m; ++j) {
            if (done[j] || t.factors[j - 1].field != f || diag.count(j) || grad_with.count(j))
                break;
            done[j] = true;
            ++count;
        }
        std::string core = field_text(f, st);
        if (count > 1) {
            if (st == PrintStyle::latex && f == FieldLabel::psi_star)
                core = "(" + core + ")^" + std::to_string(count);
            else
                core += "^" + std::to_string(count);
        }
        emit(core);
    }
    if (first) emit("1");

    ExactComplex sign((sign_flips % 2 == 0) ? 1 : -1);
    return {t.coeff * mc * sign, body.str()};
}

}  // namespace

std::string pretty_print(const Functional& F, PrintStyle st) {
    if (F.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const Term& t : F.terms()) {
        for (const auto& [mono, mc] : t.kernel.monomials()) {
            RenderedPiece p = render_monomial(t, mono, mc, st);
            ExactComplex c = p.coeff;
            bool negative = (c.re.is_zero() ? c.im < Rational(0) : c.re < Rational(0)) &&
                            (c.re.is_zero() || c.im.is_zero());
            if (first) {
                if (negative) out << "-";
            } else {
                out << (negative ? " - " : " + ");
            }
            first = false;
            ExactComplex mag = negative ? -c : c;
            std::string cs = coeff_text(mag, st);
            std::string intro = (st == PrintStyle::laplacian) ? "int[" : "\\int ";
            std::string outro = (st == PrintStyle::laplacian) ? "]" : "";
            if (mag == ExactComplex(1)) {
                out << intro << p.body << outro;
            } else if (st == PrintStyle::laplacian) {
                out << "(" << cs << ") " << intro << p.body << outro;
            } else {
                out << cs << " " << intro << p.body << outro;
            }
        }
    }
    return out.str();
}

std::string to_json(const Functional& F) {
    std::ostringstream out;
    auto cplx = [](const ExactComplex& c) {
        return std::string("{\"re\":\"") + c.re.to_string() + "\",\"im\":\"" + c.im.to_string() +
               "\"}";
    };
    out << "{\"terms\":[";
    bool ft = true;
    for (const Term& t : F.terms()) {
        if (!ft) out << ",";
        ft = false;
        out << "{\"coeff\":" << cplx(t.coeff) << ",\"factors\":[";
        for (std::size_t i = 0; i < t.factors.size(); ++i) {
            if (i) out << ",";
            out << "\"" << label_name(t.factors[i].field) << "\"";
        }
        out << "],\"kernel\":[";
        bool fm = true;
        for (const auto& [mono, mc] : t.kernel.monomials()) {
            if (!fm) out << ",";
            fm = false;
            out << "{\"coeff\":" << cplx(mc) << ",\"dots\":[";
            for (std::size_t i = 0; i < mono.size(); ++i) {
                if (i) out << ",";
                out << "[" << kvar_lo(mono[i]) << "," << kvar_hi(mono[i]) << "]";
            }
            out << "]}";
        }
        out << "]}";
    }
    out << "]}";
    return out.str();
}

}  // namespace nf
