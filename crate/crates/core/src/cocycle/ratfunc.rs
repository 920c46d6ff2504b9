//! Rational functions with factored denominators.
//!
//! Every denominator arising in the cocycle computations is a product of
//! homogeneous linear forms in (x1, x2, x3) — the arguments of the
//! special-function atoms are ratios of linear forms, and all later
//! arithmetic preserves that shape. Keeping the factorization explicit
//! makes reduction a sequence of exact linear divisions and keeps
//! equality syntactic.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

use super::poly::{Lin, Mono, Poly, NVARS};

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    /// monic linear factors with multiplicities
    den: BTreeMap<Lin, u32>,
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc {
            num: Poly::zero(),
            den: BTreeMap::new(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(Poly::one())
    }

    pub fn int(n: i64) -> RatFunc {
        RatFunc::from_poly(Poly::int(n))
    }

    pub fn rational(c: BigRational) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn from_poly(num: Poly) -> RatFunc {
        RatFunc {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn var(i: usize) -> RatFunc {
        RatFunc::from_poly(Poly::var(i))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den_factors(&self) -> &BTreeMap<Lin, u32> {
        &self.den
    }

    pub fn den_poly(&self) -> Poly {
        let mut p = Poly::one();
        for (lin, mult) in &self.den {
            for _ in 0..*mult {
                p = p.mul(&lin.poly());
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(mut self) -> RatFunc {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let mut den = BTreeMap::new();
        'factors: for (lin, mult) in std::mem::take(&mut self.den) {
            let mut remaining = mult;
            while remaining > 0 {
                match self.num.div_exact_linear(&lin) {
                    Some(q) => {
                        self.num = q;
                        remaining -= 1;
                    }
                    None => {
                        den.insert(lin, remaining);
                        continue 'factors;
                    }
                }
            }
        }
        self.den = den;
        self
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        // lcm of the factored denominators
        let mut den: BTreeMap<Lin, u32> = self.den.clone();
        for (lin, m) in &other.den {
            let e = den.entry(lin.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let mut n1 = self.num.clone();
        let mut n2 = other.num.clone();
        for (lin, m) in &den {
            let m1 = self.den.get(lin).copied().unwrap_or(0);
            let m2 = other.den.get(lin).copied().unwrap_or(0);
            for _ in 0..(m - m1) {
                n1 = n1.mul(&lin.poly());
            }
            for _ in 0..(m - m2) {
                n2 = n2.mul(&lin.poly());
            }
        }
        RatFunc {
            num: n1.add(&n2),
            den,
        }
        .reduce()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        let mut den = self.den.clone();
        for (lin, m) in &other.den {
            *den.entry(lin.clone()).or_insert(0) += m;
        }
        RatFunc {
            num: self.num.mul(&other.num),
            den,
        }
        .reduce()
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add_int(&self, n: i64) -> RatFunc {
        self.add(&RatFunc::int(n))
    }

    /// Reciprocal. Supported whenever the numerator is a monomial times
    /// at most one general linear form, which covers every inversion the
    /// cocycle computations perform (all atom arguments are ratios of
    /// linear forms). Returns None otherwise.
    pub fn try_recip(&self) -> Option<RatFunc> {
        if self.num.is_zero() {
            return None;
        }
        let (mono, _) = self.num.monomial_content();
        if mono[0] != 0 {
            // z in a denominator never occurs in this calculus
            return None;
        }
        let core = self.num.div_monomial(&mono);
        // new numerator: old denominator
        let mut num = self.den_poly();
        let mut den: BTreeMap<Lin, u32> = BTreeMap::new();
        // monomial factors become x_i powers in the denominator
        for i in 1..NVARS {
            if mono[i] > 0 {
                let (lin, _) = Lin::from_poly(&Poly::var(i)).unwrap();
                *den.entry(lin).or_insert(0) += mono[i];
            }
        }
        if core.is_constant() {
            let c = core.constant_part();
            num = num.scale(&c.recip());
        } else {
            let (lin, scalar) = Lin::from_poly(&core)?;
            *den.entry(lin).or_insert(0) += 1;
            num = num.scale(&scalar.recip());
        }
        Some(RatFunc { num, den }.reduce())
    }

    pub fn recip(&self) -> RatFunc {
        self.try_recip().unwrap_or_else(|| {
            panic!("non-invertible numerator in RatFunc::recip: {:?}", self.num)
        })
    }

    pub fn div(&self, other: &RatFunc) -> RatFunc {
        self.mul(&other.recip())
    }

    /// Substitutes (z, x) by degree-one images (an affine group action).
    /// Denominator factors stay linear because the action is linear on x.
    pub fn subst(&self, images: &[Poly; NVARS]) -> RatFunc {
        let num = self.num.subst(images);
        let mut den = BTreeMap::new();
        let mut scalar = BigRational::one();
        for (lin, m) in &self.den {
            let mapped = lin.poly().subst(images);
            let (lin2, s) = Lin::from_poly(&mapped)
                .expect("group action must keep denominators linear");
            for _ in 0..*m {
                scalar *= s.clone();
            }
            *den.entry(lin2).or_insert(0) += m;
        }
        RatFunc {
            num: num.scale(&scalar.recip()),
            den,
        }
        .reduce()
    }

    /// Is this exactly a rational constant?
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_empty() && self.num.is_constant() {
            Some(self.num.constant_part())
        } else {
            None
        }
    }

    /// Is this an integer constant?
    pub fn as_integer(&self) -> Option<BigInt> {
        let c = self.as_constant()?;
        if c.denom().is_one() {
            Some(c.numer().clone())
        } else {
            None
        }
    }

    /// Homogeneous of the given total degree in (z, x1, x2, x3)?
    pub fn is_homogeneous_of_degree(&self, degree: i64) -> bool {
        if self.num.is_zero() {
            return true;
        }
        if !self.num.is_homogeneous() {
            return false;
        }
        let dn = self.num.total_degree().unwrap_or(0) as i64;
        let dd: i64 = self.den.values().map(|m| *m as i64).sum();
        dn - dd == degree
    }

    /// Numeric evaluation at complex coordinates (z, x1, x2, x3).
    pub fn eval_c(&self, at: &[Complex64; NVARS]) -> Complex64 {
        let n = self.num.eval_c(at);
        let mut d = Complex64::new(1.0, 0.0);
        for (lin, m) in &self.den {
            let v = lin.poly().eval_c(at);
            for _ in 0..*m {
                d *= v;
            }
        }
        n / d
    }

    /// Decomposes `self = a·1 + b·basis[0] + c·basis[1] + …` with rational
    /// coefficients, if such a decomposition exists. Exact Gaussian
    /// elimination on the monomial-coefficient matrix over a common
    /// denominator.
    pub fn decompose_over(&self, basis: &[&RatFunc]) -> Option<Vec<BigRational>> {
        // common denominator of self, 1, and the basis
        let mut den: BTreeMap<Lin, u32> = self.den.clone();
        for b in basis {
            for (lin, m) in &b.den {
                let e = den.entry(lin.clone()).or_insert(0);
                *e = (*e).max(*m);
            }
        }
        let on_common = |f: &RatFunc| -> Poly {
            let mut n = f.num.clone();
            for (lin, m) in &den {
                let have = f.den.get(lin).copied().unwrap_or(0);
                for _ in 0..(m - have) {
                    n = n.mul(&lin.poly());
                }
            }
            n
        };
        let target = on_common(self);
        let one = RatFunc::one();
        let mut columns: Vec<Poly> = vec![on_common(&one)];
        for b in basis {
            columns.push(on_common(b));
        }

        // collect all monomials
        let mut monos: Vec<Mono> = Vec::new();
        for p in columns.iter().chain(std::iter::once(&target)) {
            for (m, _) in p.terms() {
                if !monos.contains(m) {
                    monos.push(*m);
                }
            }
        }
        let ncols = columns.len();
        let mut rows: Vec<Vec<BigRational>> = monos
            .iter()
            .map(|m| {
                let mut row: Vec<BigRational> = columns
                    .iter()
                    .map(|p| {
                        p.terms()
                            .find(|(k, _)| *k == m)
                            .map(|(_, c)| c.clone())
                            .unwrap_or_else(BigRational::zero)
                    })
                    .collect();
                row.push(
                    target
                        .terms()
                        .find(|(k, _)| *k == m)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(BigRational::zero),
                );
                row
            })
            .collect();

        // Gaussian elimination
        let mut pivot_rows: Vec<usize> = Vec::new();
        let mut r0 = 0usize;
        for col in 0..ncols {
            let Some(pr) = (r0..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                pivot_rows.push(usize::MAX);
                continue;
            };
            rows.swap(r0, pr);
            let piv = rows[r0][col].clone();
            for c in col..=ncols {
                rows[r0][c] = &rows[r0][c] / &piv;
            }
            for r in 0..rows.len() {
                if r != r0 && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    for c in col..=ncols {
                        rows[r][c] = &rows[r][c] - &f * &rows[r0][c];
                    }
                }
            }
            pivot_rows.push(r0);
            r0 += 1;
        }
        // inconsistent rows?
        for r in r0..rows.len() {
            if !rows[r][ncols].is_zero() {
                return None;
            }
        }
        let mut sol = vec![BigRational::zero(); ncols];
        for (col, &pr) in pivot_rows.iter().enumerate() {
            if pr != usize::MAX {
                sol[col] = rows[pr][ncols].clone();
            }
        }
        // verify (free columns default to zero, so recheck)
        let mut recon = RatFunc::rational(sol[0].clone());
        for (i, b) in basis.iter().enumerate() {
            recon = recon.add(&b.scale(&sol[i + 1]));
        }
        if recon == *self {
            Some(sol)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.as_constant().and_then(|c| c.to_f64())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})", self.num)?;
        if !self.den.is_empty() {
            write!(f, " / (")?;
            for (lin, m) in &self.den {
                write!(f, "[{:?}]^{} ", lin.poly(), m)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Convenience: (a·z + b·x1 + c·x2 + d·x3 + e) / (linear form), the shape
/// of every atom argument.
pub fn linear_ratio(num: [i64; 5], den: [i64; 3]) -> RatFunc {
    let mut n = Poly::int(num[4]);
    for i in 0..4 {
        n = n.add(&Poly::var(i).scale(&BigRational::from(BigInt::from(num[i]))));
    }
    let mut d = Poly::zero();
    for i in 0..3 {
        d = d.add(&Poly::var(i + 1).scale(&BigRational::from(BigInt::from(den[i]))));
    }
    RatFunc::from_poly(n).div(&RatFunc::from_poly(d))
}
