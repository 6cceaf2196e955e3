//! Fixed inputs shared by the benchmarks.

use quatpoly::{parse_poly, PolyQ, QPoly, Quaternion};

pub fn quadratic() -> PolyQ {
    parse_poly("z^2 - z*(j+2k) + 2i").expect("valid")
}

/// Degree 7 with a double spherical zero at `[i]`.
pub fn seventh() -> PolyQ {
    parse_poly("(z^2+1)^2*(z-k)*(z-j)*(z-1-i)").expect("valid")
}

/// Degree 8 mixing real, spherical and isolated zeros.
pub fn mixed() -> PolyQ {
    parse_poly("(z-2)^2*(z^2+1)*(z-j)*(z-1-i)*(z-1+k)*(z-1/2-3j)").expect("valid")
}

/// Float polynomial of degree 10 with two clusters close together.
pub fn float_clustered() -> QPoly<f64> {
    let q = Quaternion::<f64>::from_f64s;
    let mut f = QPoly::one();
    for r in [
        q(1.75, 0.0, 0.0, 0.0),
        q(1.75, 0.0, 0.0, 0.0),
        q(1.8, 0.2, -0.24, 0.14),
        q(1.8, 0.2, -0.24, 0.14).conj(),
        q(0.8, 0.1, 0.2, -0.16),
        q(-0.3, 0.5, 0.1, 0.0),
        q(-0.3, 0.1, 0.5, 0.0),
        q(0.4, 0.0, -1.2, 0.7),
        q(-1.1, 0.0, 0.0, 0.9),
        q(0.2, 1.3, 0.0, 0.0),
    ] {
        f = &f * &QPoly::rho(&r);
    }
    f
}

pub fn blaschke_roots<S: quatpoly::Scalar>() -> Vec<Quaternion<S>> {
    let r = |a, b, c, d| Quaternion::new(S::from_ratio(a, 8), S::from_ratio(b, 8), S::from_ratio(c, 8), S::from_ratio(d, 8));
    vec![r(1, 2, -1, 3), r(-2, 1, 1, 1), r(3, 0, -2, 1), r(1, -1, 2, -2)]
}
