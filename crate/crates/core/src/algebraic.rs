//! Exact real algebraic numbers for Perron roots.
//!
//! Polynomials have rational coefficients. A [`RealRoot`] is a squarefree
//! polynomial together with a half-open interval `(lo, hi]` containing exactly
//! one of its roots; Sturm sequences count roots, and equality of two roots is
//! decided through the gcd of their polynomials rather than numerically.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Polynomial over ℚ, coefficients from the constant term upwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn lead(&self) -> &BigRational {
        self.coeffs.last().expect("non-zero polynomial")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        let lead = d.lead();
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / lead;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] = &rem[i + j] - &q * dc;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        Poly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    /// The product of the distinct irreducible factors (same roots, all simple).
    pub fn squarefree(&self) -> Poly {
        let g = Poly::gcd(self, &self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Sturm sequence p, p', -rem(p, p'), …
    pub fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone()];
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(Poly::new(r.coeffs.into_iter().map(|c| -c).collect()));
        }
        seq
    }

    /// Every real root lies in `[-B, B]`.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.lead().abs();
        let m = self
            .coeffs
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        m + BigRational::one()
    }
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Number of distinct roots in `(lo, hi]` of the squarefree polynomial whose
/// Sturm sequence is `seq`.
pub fn count_roots(seq: &[Poly], lo: &BigRational, hi: &BigRational) -> usize {
    if lo >= hi {
        return 0;
    }
    sign_changes(seq, lo).saturating_sub(sign_changes(seq, hi))
}

/// det(xI − A) for a square nonnegative integer matrix, by Faddeev–LeVerrier
/// (all divisions are exact).
pub fn charpoly(rows: &[Vec<u64>]) -> Poly {
    let n = rows.len();
    let a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1}·I
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for (l, mlj) in m.iter().enumerate() {
                    if !a[i][l].is_zero() && !mlj[j].is_zero() {
                        s += &a[i][l] * &mlj[j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &c[n - k + 1];
        }
        m = next;
        let mut tr = BigInt::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        let (q, r) = tr.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        c[n - k] = -q;
    }
    Poly::new(c.into_iter().map(BigRational::from_integer).collect())
}

/// A real root of a squarefree polynomial, isolated in `(lo, hi]`.
#[derive(Debug, Clone)]
pub struct RealRoot {
    poly: Poly,
    sturm: Vec<Poly>,
    lo: BigRational,
    hi: BigRational,
}

/// Default isolation width: 10⁻⁹.
pub fn default_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64.pow(9)))
}

impl RealRoot {
    /// The largest real root of `p`, if any, isolated to width ≤ 10⁻⁹.
    pub fn largest(p: &Poly) -> Option<RealRoot> {
        if p.degree().unwrap_or(0) == 0 {
            return None;
        }
        let poly = p.squarefree();
        let sturm = poly.sturm();
        let bound = poly.root_bound();
        let mut lo = -&bound - BigRational::one();
        let mut hi = bound;
        if count_roots(&sturm, &lo, &hi) == 0 {
            return None;
        }
        let two = rat(2);
        // invariant: the largest root lies in (lo, hi]
        while count_roots(&sturm, &lo, &hi) > 1 {
            let mid = (&lo + &hi) / &two;
            if count_roots(&sturm, &mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut r = RealRoot { poly, sturm, lo, hi };
        r.refine(&default_width());
        Some(r)
    }

    /// The integer `k` as a root of `x - k`.
    pub fn integer(k: i64) -> RealRoot {
        let poly = Poly::from_ints(&[-k, 1]);
        let sturm = poly.sturm();
        RealRoot {
            poly,
            sturm,
            lo: rat(k) - rat(1) / rat(1 << 30),
            hi: rat(k),
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn bounds(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Bisects until the enclosure is no wider than `width`.
    pub fn refine(&mut self, width: &BigRational) {
        let two = rat(2);
        while &self.width() > width {
            let mid = (&self.lo + &self.hi) / &two;
            if count_roots(&self.sturm, &mid, &self.hi) == 1 {
                self.lo = mid;
            } else {
                self.hi = mid;
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }

    /// Exact equality through the common factor of the two polynomials.
    pub fn exact_eq(&self, other: &RealRoot) -> bool {
        let g = Poly::gcd(&self.poly, &other.poly);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        count_roots(&g.sturm(), lo, hi) > 0
    }

    pub fn cmp_exact(&self, other: &RealRoot) -> Ordering {
        if self.exact_eq(other) {
            return Ordering::Equal;
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            let wa = a.width() / rat(2);
            let wb = b.width() / rat(2);
            a.refine(&wa);
            b.refine(&wb);
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        let t = self.hi.floor();
        if t > self.lo && self.poly.eval(&t).is_zero() {
            Some(t.to_integer())
        } else {
            None
        }
    }

    /// Decimal rendering: exact for integers, otherwise rounded to `digits`
    /// places from an enclosure two orders of magnitude tighter.
    pub fn decimal(&self, digits: u32) -> String {
        if let Some(k) = self.as_integer() {
            return k.to_string();
        }
        let scale = BigInt::from(10u32).pow(digits);
        let mut r = self.clone();
        r.refine(&BigRational::new(BigInt::one(), &scale * BigInt::from(100)));
        let mid = (&r.lo + &r.hi) / rat(2);
        let scaled = (mid * BigRational::from_integer(scale.clone())).round().to_integer();
        let neg = scaled.is_negative();
        let digits_str = scaled.abs().to_string();
        let d = digits as usize;
        let padded = format!("{:0>width$}", digits_str, width = d + 1);
        let (int, frac) = padded.split_at(padded.len() - d);
        format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
    }
}

impl fmt::Display for RealRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.decimal(9))
    }
}
