#include "kvn/grassmann.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <stdexcept>

namespace kvn {

GeneratorSet::GeneratorSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() > 64)
        throw std::invalid_argument("GeneratorSet: at most 64 generators supported");
    for (std::size_t i = 0; i < names_.size(); ++i)
        for (std::size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j])
                throw std::invalid_argument("GeneratorSet: duplicate generator name '" + names_[i] + "'");
}

std::size_t GeneratorSet::index(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    throw std::out_of_range("GeneratorSet: unknown generator '" + std::string(name) + "'");
}

bool GeneratorSet::same_as(const GeneratorSet& other) const noexcept {
    return this == &other || names_ == other.names_;
}

GrassmannElement::GrassmannElement(GeneratorSetPtr gens) : gens_(std::move(gens)) {
    if (!gens_) throw std::invalid_argument("GrassmannElement: null generator set");
}

GrassmannElement GrassmannElement::zero(GeneratorSetPtr gens) { return GrassmannElement(std::move(gens)); }

GrassmannElement GrassmannElement::scalar(GeneratorSetPtr gens, Complex value) {
    GrassmannElement e(std::move(gens));
    e.insert_term(0, value);
    return e;
}

GrassmannElement GrassmannElement::generator(GeneratorSetPtr gens, std::size_t index) {
    if (index >= gens->size()) throw std::out_of_range("GrassmannElement: generator index out of range");
    GrassmannElement e(std::move(gens));
    e.insert_term(Mask{1} << index, Complex(1.0, 0.0));
    return e;
}

GrassmannElement GrassmannElement::monomial(GeneratorSetPtr gens, Mask mask, Complex coeff) {
    if (gens->size() < 64 && (mask >> gens->size()) != 0)
        throw std::out_of_range("GrassmannElement: monomial mask outside generator set");
    GrassmannElement e(std::move(gens));
    e.insert_term(mask, coeff);
    return e;
}

Complex GrassmannElement::coefficient(Mask mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? Complex(0.0, 0.0) : it->second;
}

std::set<int> GrassmannElement::grades() const {
    std::set<int> out;
    for (const auto& [mask, coeff] : terms_) out.insert(std::popcount(mask));
    return out;
}

bool GrassmannElement::homogeneous_parity(int parity) const {
    for (const auto& [mask, coeff] : terms_)
        if ((std::popcount(mask) & 1) != parity) return false;
    return true;
}

double GrassmannElement::norm() const {
    double s = 0.0;
    for (const auto& [mask, coeff] : terms_) s += std::norm(coeff);
    return std::sqrt(s);
}

void GrassmannElement::insert_term(Mask mask, Complex coeff) {
    if (coeff == Complex(0.0, 0.0)) return;
    auto [it, inserted] = terms_.try_emplace(mask, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
    }
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& rhs) {
    if (!gens_->same_as(*rhs.gens_))
        throw std::invalid_argument("GrassmannElement: mismatched generator sets in +");
    for (const auto& [mask, coeff] : rhs.terms_) insert_term(mask, coeff);
    return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& rhs) {
    if (!gens_->same_as(*rhs.gens_))
        throw std::invalid_argument("GrassmannElement: mismatched generator sets in -");
    for (const auto& [mask, coeff] : rhs.terms_) insert_term(mask, -coeff);
    return *this;
}

GrassmannElement& GrassmannElement::operator*=(Complex s) {
    if (s == Complex(0.0, 0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto& [mask, coeff] : terms_) coeff *= s;
    return *this;
}

int merge_sign(Mask a, Mask b) noexcept {
    // Each generator of b moves left past the generators of a with larger index.
    int swaps = 0;
    while (b) {
        const int j = std::countr_zero(b);
        swaps += std::popcount(a >> (j + 1));
        b &= b - 1;
    }
    return (swaps & 1) ? -1 : 1;
}

GrassmannElement multiply(const GrassmannElement& a, const GrassmannElement& b) {
    if (!a.generators()->same_as(*b.generators()))
        throw std::invalid_argument("GrassmannElement: mismatched generator sets in *");
    GrassmannElement out(a.generators());
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            if (ma & mb) continue;  // repeated generator -> 0
            const int sign = merge_sign(ma, mb);
            out += GrassmannElement::monomial(a.generators(), ma | mb,
                                              (sign > 0 ? ca * cb : -(ca * cb)));
        }
    }
    return out;
}

GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
    return multiply(a, b);
}

bool GrassmannElement::operator==(const GrassmannElement& rhs) const {
    return gens_->same_as(*rhs.gens_) && terms_ == rhs.terms_;
}

GrassmannElement left_derivative(const GrassmannElement& a, std::size_t gen_index) {
    if (gen_index >= a.generators()->size())
        throw std::out_of_range("left_derivative: generator index out of range");
    const Mask g = Mask{1} << gen_index;
    GrassmannElement out(a.generators());
    for (const auto& [mask, coeff] : a.terms()) {
        if (!(mask & g)) continue;
        // anticommute g to the front: one sign flip per lower-index generator present
        const int below = std::popcount(mask & (g - 1));
        out += GrassmannElement::monomial(a.generators(), mask ^ g,
                                          (below & 1) ? -coeff : coeff);
    }
    return out;
}

GrassmannElement berezin(const GrassmannElement& a, std::span<const std::size_t> vars) {
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j])
                throw std::invalid_argument("berezin: duplicate integration variable");
    // innermost integral is the last listed variable
    GrassmannElement out = a;
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        out = left_derivative(out, *it);
    return out;
}

GrassmannElement berezin(const GrassmannElement& a, std::initializer_list<std::size_t> vars) {
    std::vector<std::size_t> v(vars);
    return berezin(a, std::span<const std::size_t>(v));
}

GrassmannElement coefficient_of(const GrassmannElement& a, Mask front) {
    GrassmannElement out(a.generators());
    for (const auto& [mask, coeff] : a.terms()) {
        if ((mask & front) != front) continue;
        const Mask rest = mask ^ front;
        const int sign = merge_sign(front, rest);
        out += GrassmannElement::monomial(a.generators(), rest, sign > 0 ? coeff : -coeff);
    }
    return out;
}

GrassmannElement restrict_away(const GrassmannElement& a, Mask dropped) {
    GrassmannElement out(a.generators());
    for (const auto& [mask, coeff] : a.terms())
        if (!(mask & dropped)) out += GrassmannElement::monomial(a.generators(), mask, coeff);
    return out;
}

std::string GrassmannElement::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    char buf[128];
    for (const auto& [mask, coeff] : terms_) {
        if (!out.empty()) out += '\n';
        std::snprintf(buf, sizeof buf, "(%.17g%+.17gi) *", coeff.real(), coeff.imag());
        out += buf;
        if (mask == 0) {
            out += " 1";
        } else {
            for (std::size_t i = 0; i < gens_->size(); ++i)
                if (mask & (Mask{1} << i)) {
                    out += ' ';
                    out += gens_->name(i);
                }
        }
    }
    return out;
}

}  // namespace kvn
