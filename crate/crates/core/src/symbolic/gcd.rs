//! Exact multivariate gcd by recursive primitive pseudo-remainder sequences.

use super::{Atom, Monomial, Poly, Q};
use num_traits::One;

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }

    let ma = a.monomial_content();
    let mb = b.monomial_content();
    if !ma.is_one() || !mb.is_one() {
        let gm = ma.gcd(&mb);
        let a1 = a.div_monomial(&ma).expect("content divides");
        let b1 = b.div_monomial(&mb).expect("content divides");
        let rest = gcd(&a1, &b1);
        return rest.mul_term(&gm, &Q::one());
    }

    let va = a.atoms();
    let vb = b.atoms();
    if let Some(v) = va.iter().find(|v| !vb.contains(*v)) {
        return gcd_with_content(a, v, b);
    }
    if let Some(v) = vb.iter().find(|v| !va.contains(*v)) {
        return gcd_with_content(b, v, a);
    }

    // every variable is shared: pick the one of smallest degree as main variable
    let v = va
        .iter()
        .min_by_key(|v| (a.degree_in(v).max(b.degree_in(v)), std::cmp::Reverse((*v).clone())))
        .expect("non-constant polynomial has atoms")
        .clone();

    let ca = content_in(a, &v);
    let cb = content_in(b, &v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);

    let (mut f, mut g) = if pa.degree_in(&v) >= pb.degree_in(&v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = pseudo_rem(&f, &g, &v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&v) == 0 {
            return c.monic();
        }
        f = g;
        g = primitive_part(&r, &v);
    }
    let g = primitive_part(&g, &v);
    (&c * &g).monic()
}

/// `gcd(content_v(a), b)` where `b` is free of `v`.
fn gcd_with_content(a: &Poly, v: &Atom, b: &Poly) -> Poly {
    let mut g = b.clone();
    let mut coeffs = a.coeffs_in(v);
    coeffs.retain(|c| !c.is_zero());
    coeffs.sort_by_key(|c| c.len());
    for c in coeffs {
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g.monic()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &Poly, v: &Atom) -> Poly {
    let mut coeffs = p.coeffs_in(v);
    coeffs.retain(|c| !c.is_zero());
    coeffs.sort_by_key(|c| c.len());
    let mut g = Poly::zero();
    for c in coeffs {
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(p: &Poly, v: &Atom) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

/// Pseudo-remainder of `f` by `g` with respect to `v`.
fn pseudo_rem(f: &Poly, g: &Poly, v: &Atom) -> Poly {
    let dg = g.degree_in(v);
    let lc = g.coeffs_in(v).pop().expect("nonzero");
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lr = r.coeffs_in(v).pop().expect("nonzero");
        let shift = Monomial::atom(v.clone(), dr - dg);
        r = &(&lc * &r) - &(&lr * &g.mul_term(&shift, &Q::one()));
    }
    r
}
