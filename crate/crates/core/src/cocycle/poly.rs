//! Exact multivariate polynomials over Q in the variables (z, x1, x2, x3).
//!
//! Terms live in a BTreeMap keyed by exponent vectors, so the zero test
//! and equality are syntactic. No floating point anywhere.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub const NVARS: usize = 4;
pub const VAR_NAMES: [&str; NVARS] = ["z", "x1", "x2", "x3"];

/// Exponent vector for (z, x1, x2, x3).
pub type Mono = [u32; NVARS];

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Mono, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Poly {
    pub fn zero() -> Poly {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert([0; NVARS], c);
        }
        p
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(BigRational::from(BigInt::from(n)))
    }

    pub fn one() -> Poly {
        Poly::int(1)
    }

    pub fn var(i: usize) -> Poly {
        let mut m = [0u32; NVARS];
        m[i] = 1;
        let mut p = Poly::zero();
        p.terms.insert(m, BigRational::one());
        p
    }

    pub fn monomial(m: Mono, c: BigRational) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = *m1;
                for i in 0..NVARS {
                    m[i] += m2[i];
                }
                out.insert_add(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Substitutes each variable by the given polynomial.
    pub fn subst(&self, images: &[Poly; NVARS]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for i in 0..NVARS {
                for _ in 0..m[i] {
                    t = t.mul(&images[i]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// The constant term.
    pub fn constant_part(&self) -> BigRational {
        self.terms
            .get(&[0; NVARS])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|m| *m == [0; NVARS])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| m.iter().sum::<u32>())
            .max()
    }

    /// Every term has the same total degree (the zero polynomial counts
    /// as homogeneous of any degree).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// The coefficient viewed as polynomial in variable `v` of degree `d`.
    fn coeff_in_var(&self, v: usize, d: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m[v] == d {
                let mut m2 = *m;
                m2[v] = 0;
                out.insert_add(m2, c.clone());
            }
        }
        out
    }

    fn degree_in_var(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m[v]).max().unwrap_or(0)
    }

    /// Exact division by a linear form whose leading variable has
    /// coefficient 1. Returns None if the division leaves a remainder.
    pub fn div_exact_linear(&self, lin: &Lin) -> Option<Poly> {
        let v = lin.leading_var();
        // divisor = x_v + rest
        let rest = lin.poly().sub(&Poly::var(v));
        let mut quotient = Poly::zero();
        let mut rem = self.clone();
        while rem.degree_in_var(v) >= 1 {
            let d = rem.degree_in_var(v);
            let lead = rem.coeff_in_var(v, d);
            // term = lead * x_v^{d-1}
            let mut shift = [0u32; NVARS];
            shift[v] = d - 1;
            let term = lead.mul(&Poly::monomial(shift, BigRational::one()));
            quotient = quotient.add(&term);
            rem = rem.sub(&term.mul(&Poly::var(v)).add(&term.mul(&rest)));
        }
        if rem.is_zero() {
            Some(quotient)
        } else {
            None
        }
    }

    /// Largest monomial dividing every term, with the matching rational
    /// content of its coefficient extracted as well.
    pub fn monomial_content(&self) -> (Mono, BigRational) {
        if self.is_zero() {
            return ([0; NVARS], BigRational::one());
        }
        let mut m = *self.terms.keys().next().unwrap();
        for k in self.terms.keys() {
            for i in 0..NVARS {
                m[i] = m[i].min(k[i]);
            }
        }
        let lead = self.terms.values().next_back().unwrap().clone();
        (m, lead)
    }

    pub fn div_monomial(&self, m: &Mono) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let mut k2 = *k;
                    for i in 0..NVARS {
                        assert!(k2[i] >= m[i]);
                        k2[i] -= m[i];
                    }
                    (k2, c.clone())
                })
                .collect(),
        }
    }

    /// Leading coefficient under the monomial order.
    pub fn leading_coeff(&self) -> BigRational {
        self.terms
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Numeric evaluation at complex coordinates.
    pub fn eval_c(&self, at: &[Complex64; NVARS]) -> Complex64 {
        let mut out = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for i in 0..NVARS {
                for _ in 0..m[i] {
                    t *= at[i];
                }
            }
            out += t;
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for i in 0..NVARS {
                if m[i] > 0 {
                    write!(f, "*{}^{}", VAR_NAMES[i], m[i])?;
                }
            }
        }
        Ok(())
    }
}

/// A normalized homogeneous linear form in (x1, x2, x3): the leading
/// (lowest-index nonzero) coefficient is 1, so equal forms have equal
/// keys. z never appears in denominators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Lin {
    /// coefficients of (x1, x2, x3)
    pub coeffs: [BigRational; 3],
}

impl Lin {
    /// Normalizes a linear homogeneous polynomial in (x1,x2,x3) into a
    /// monic form plus the scalar that was divided out.
    pub fn from_poly(p: &Poly) -> Option<(Lin, BigRational)> {
        let mut coeffs = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        for (m, c) in &p.terms {
            if m[0] != 0 || m.iter().sum::<u32>() != 1 {
                return None;
            }
            for i in 0..3 {
                if m[i + 1] == 1 {
                    coeffs[i] = c.clone();
                }
            }
        }
        let lead = coeffs.iter().find(|c| !c.is_zero())?.clone();
        for c in &mut coeffs {
            *c /= lead.clone();
        }
        Some((Lin { coeffs }, lead))
    }

    pub fn poly(&self) -> Poly {
        let mut p = Poly::zero();
        for i in 0..3 {
            p = p.add(&Poly::var(i + 1).scale(&self.coeffs[i]));
        }
        p
    }

    pub fn leading_var(&self) -> usize {
        for i in 0..3 {
            if !self.coeffs[i].is_zero() {
                return i + 1;
            }
        }
        unreachable!("zero linear form")
    }
}

/// Sign of the leading coefficient under the monomial order; used to
/// orient periods before the sign rules are applied.
pub fn leading_sign(p: &Poly) -> i32 {
    let c = p.leading_coeff();
    if c.is_zero() {
        0
    } else if c.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn arithmetic_and_equality() {
        let z = x(0);
        let a = z.mul(&z).add(&Poly::int(3));
        let b = Poly::int(3).add(&z.mul(&z));
        assert_eq!(a, b);
        assert!(a.sub(&b).is_zero());
    }

    #[test]
    fn substitution() {
        // f = z*x1 under z -> z - x2 becomes z*x1 - x2*x1
        let f = x(0).mul(&x(1));
        let images = [x(0).sub(&x(2)), x(1), x(2), x(3)];
        let g = f.subst(&images);
        assert_eq!(g, x(0).mul(&x(1)).sub(&x(2).mul(&x(1))));
    }

    #[test]
    fn linear_division() {
        // (x1 - x3)(x1 + 2x2) divisible by normalized x1 - x3
        let f = x(1).sub(&x(3)).mul(&x(1).add(&x(2).scale(&rat(2, 1))));
        let (lin, s) = Lin::from_poly(&x(1).sub(&x(3))).unwrap();
        assert!(s.is_one());
        let q = f.div_exact_linear(&lin).unwrap();
        assert_eq!(q, x(1).add(&x(2).scale(&rat(2, 1))));
        // and x1 + x2 is not a divisor
        let (lin2, _) = Lin::from_poly(&x(1).add(&x(2))).unwrap();
        assert!(f.div_exact_linear(&lin2).is_none());
    }

    #[test]
    fn homogeneity() {
        assert!(x(0).mul(&x(1)).add(&x(2).mul(&x(3))).is_homogeneous());
        assert!(!x(0).add(&Poly::int(1)).is_homogeneous());
    }

    use num_traits::One;
}
