#ifndef KVNCPI_GRASSMANN_HPP
#define KVNCPI_GRASSMANN_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kvn {

using Complex = std::complex<double>;

/// Ordered set of anticommuting generators. The order is fixed at
/// construction and defines the canonical (ascending) monomial form, hence
/// every sign in the algebra. At most 64 generators so a monomial is a
/// bitmask over generator indices.
class GeneratorSet {
  public:
    explicit GeneratorSet(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    /// Index of a named generator; throws std::out_of_range if unknown.
    std::size_t index(std::string_view name) const;
    bool same_as(const GeneratorSet& other) const noexcept;

  private:
    std::vector<std::string> names_;
};

using GeneratorSetPtr = std::shared_ptr<const GeneratorSet>;

/// Monomial = subset of generators, encoded as a bitmask (bit i <-> generator i).
using Mask = std::uint64_t;

/// Element of the complex Grassmann algebra over a GeneratorSet.
/// Stored as canonical-form monomials with nonzero complex coefficients;
/// the empty map is the zero element. Values are immutable in spirit:
/// all operations return new elements, so sharing across threads is safe.
class GrassmannElement {
  public:
    explicit GrassmannElement(GeneratorSetPtr gens);

    static GrassmannElement zero(GeneratorSetPtr gens);
    static GrassmannElement scalar(GeneratorSetPtr gens, Complex value);
    static GrassmannElement generator(GeneratorSetPtr gens, std::size_t index);
    static GrassmannElement monomial(GeneratorSetPtr gens, Mask mask, Complex coeff);

    const GeneratorSetPtr& generators() const noexcept { return gens_; }
    const std::map<Mask, Complex>& terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    /// Coefficient of the canonical monomial with the given mask (0 if absent).
    Complex coefficient(Mask mask) const;
    /// Set of monomial degrees present in the element.
    std::set<int> grades() const;
    /// True if every monomial has the given parity (0 even / 1 odd).
    bool homogeneous_parity(int parity) const;
    /// sqrt(sum of |coefficient|^2) over all monomials.
    double norm() const;

    GrassmannElement& operator+=(const GrassmannElement& rhs);
    GrassmannElement& operator-=(const GrassmannElement& rhs);
    GrassmannElement& operator*=(Complex s);

    friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) {
        a += b;
        return a;
    }
    friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) {
        a -= b;
        return a;
    }
    friend GrassmannElement operator-(GrassmannElement a) {
        a *= Complex(-1.0, 0.0);
        return a;
    }
    friend GrassmannElement operator*(GrassmannElement a, Complex s) {
        a *= s;
        return a;
    }
    friend GrassmannElement operator*(Complex s, GrassmannElement a) {
        a *= s;
        return a;
    }
    friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b);

    bool operator==(const GrassmannElement& rhs) const;

    /// Deterministic rendering "coeff * g1 g2 ..." sorted by subset index,
    /// one term per line; "0" for the zero element. Used in golden tests.
    std::string str() const;

  private:
    void insert_term(Mask mask, Complex coeff);

    GeneratorSetPtr gens_;
    std::map<Mask, Complex> terms_;
};

/// Graded product. Terms sharing a generator vanish; otherwise the sign is
/// (-1)^(number of transpositions) needed to sort the concatenated monomial
/// into canonical ascending order.
GrassmannElement multiply(const GrassmannElement& a, const GrassmannElement& b);

/// Graded left derivative d/dg: anticommute g to the front, then remove it.
GrassmannElement left_derivative(const GrassmannElement& a, std::size_t gen_index);

/// Iterated Berezin integral over the listed generators, innermost last:
/// berezin(a, {theta, thetabar}) performs the thetabar integral first.
/// Single-variable convention: int dg (x + g y) = y, i.e. the left
/// derivative; this makes int dtheta dthetabar (thetabar*theta) = 1.
/// Throws std::invalid_argument on duplicate entries in vars.
GrassmannElement berezin(const GrassmannElement& a, std::span<const std::size_t> vars);
GrassmannElement berezin(const GrassmannElement& a, std::initializer_list<std::size_t> vars);

/// Coefficient element e with  a = front·e + (terms not containing front),
/// factoring the monomial `front` out from the left.
GrassmannElement coefficient_of(const GrassmannElement& a, Mask front);

/// Terms free of every generator listed in `dropped` (e.g. theta,thetabar -> 0).
GrassmannElement restrict_away(const GrassmannElement& a, Mask dropped);

/// Sign (-1)^k from merging two disjoint ascending monomials into one.
int merge_sign(Mask a, Mask b) noexcept;

}  // namespace kvn

#endif
