#ifndef RCR_CHAIN_HPP
#define RCR_CHAIN_HPP

#include <vector>

#include "rcr/mobius.hpp"
#include "rcr/numeric.hpp"

namespace rcr::conformal {

enum class Domain { HalfPlane, Disc };

enum class MapKind {
    ChordalSlit,   // p1 = driving value xi, p2 = capacity-time increment
    RadialSlit,    // p1 = driving angle theta, p2 = capacity increment
    HalfDisc,      // p1 = x, p2 = eps (raw g_{x,eps})
    HalfDiscFixed, // f_{x,eps} = mobius o g_{x,eps} fixing 0 and i, iterated `repeat` times
    Mobius,
};

struct SlitElement {
    MapKind kind = MapKind::Mobius;
    double p1 = 0.0;
    double p2 = 0.0;
    long repeat = 1;
    MobiusTransform mob;

    Complex apply(const Complex& z, Complex* deriv = nullptr) const;
    Complex apply_inverse(const Complex& z) const;
    double capacity() const;
};

// Mobius part of f_{x,eps}: the map m with m o g_{x,eps} fixing 0 and i.
MobiusTransform halfdisc_normalizer(double x, double eps);

SlitElement make_chordal_slit(double xi, double dcap);
SlitElement make_radial_slit(double theta, double dcap);
SlitElement make_halfdisc(double x, double eps);
SlitElement make_halfdisc_fixed(double x, double eps, long repeat);
SlitElement make_mobius(const MobiusTransform& m);

// Composition Phi = post o e_{n-1} o ... o e_0 of elementary maps with a
// terminal Mobius normalization. Evaluation accumulates the chain-rule
// derivative; boundary points of the disc stay on the unit circle exactly
// through radial slit elements.
struct SlitMapChain {
    Domain domain = Domain::Disc;
    std::vector<SlitElement> elems;
    MobiusTransform post = MobiusTransform::identity();

    Complex eval(const Complex& z, Complex* deriv = nullptr) const;
    Complex eval_inverse(const Complex& z) const;

    // Sum of slit capacity increments (Loewner time of the encoded hull).
    double capacity() const;

    void append(const SlitElement& e) { elems.push_back(e); }
    bool empty() const { return elems.empty() && post.is_identity(0.0); }
};

} // namespace rcr::conformal

#endif
