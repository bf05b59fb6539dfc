//! Test functions and their Chebyshev coefficients
//!
//! ```text
//! ψ_l(f) = (1/2π) ∫_{-π}^{π} f(2cos θ) e^{ilθ} dθ
//!        = (1/π)  ∫_{-1}^{1}  f(2s) T_l(s) / √(1 - s²) ds
//! ```
//!
//! Polynomials take an exact basis conversion; the named analytic functions
//! use the trapezoid rule on the periodic θ-form, which converges
//! geometrically for integrands analytic in a strip.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation order for analytic test functions.
pub const DEFAULT_L: usize = 64;
/// Largest `|ψ_l|` allowed over the last quarter of a truncated series.
pub const TAIL_THRESHOLD: f64 = 1e-8;
/// Largest imaginary residue tolerated in the θ-form quadrature.
pub const IMAGINARY_THRESHOLD: f64 = 1e-10;
/// Largest polynomial degree accepted.
pub const MAX_POLY_DEGREE: usize = 64;

/// A function analytic on a neighbourhood of `[-2, 2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TestFunction {
    /// Monomial coefficients, ascending degree.
    Polynomial(Vec<f64>),
    /// `exp(t·x)`
    Exp(f64),
    /// `cos(t·x)`
    Cos(f64),
    /// `Re 1/(w - x) = ½ [1/(w - x) + 1/(w̄ - x)]`, real on the real axis,
    /// with poles at `w` and `w̄`.
    Resolvent(Complex64),
}

impl TestFunction {
    pub fn polynomial(coeffs: impl Into<Vec<f64>>) -> Result<Self> {
        let mut coeffs = coeffs.into();
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        if coeffs.len() - 1 > MAX_POLY_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "polynomial degree {} exceeds {MAX_POLY_DEGREE}",
                coeffs.len() - 1
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite polynomial coefficient".into()));
        }
        Ok(TestFunction::Polynomial(coeffs))
    }

    /// `x^d`
    pub fn monomial(d: usize) -> Self {
        let mut c = vec![0.0; d + 1];
        c[d] = 1.0;
        TestFunction::polynomial(c).expect("valid monomial")
    }

    pub fn constant(c: f64) -> Self {
        TestFunction::polynomial(vec![c]).expect("valid constant")
    }

    pub fn exp(t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidParameter("exp rate must be finite".into()));
        }
        Ok(TestFunction::Exp(t))
    }

    pub fn cos(t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidParameter("cos frequency must be finite".into()));
        }
        Ok(TestFunction::Cos(t))
    }

    /// Requires the pole `w` off `[-2, 2]`.
    pub fn resolvent(w: Complex64) -> Result<Self> {
        if !w.re.is_finite() || !w.im.is_finite() {
            return Err(Error::InvalidParameter("pole must be finite".into()));
        }
        if w.im.abs() < 1e-8 && w.re.abs() <= 2.0 {
            return Err(Error::InvalidParameter(format!(
                "resolvent pole {w} lies on [-2, 2]"
            )));
        }
        Ok(TestFunction::Resolvent(w))
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            TestFunction::Polynomial(c) => Some(c.len() - 1),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &a| acc * x + a),
            TestFunction::Exp(t) => (t * x).exp(),
            TestFunction::Cos(t) => (t * x).cos(),
            TestFunction::Resolvent(w) => {
                let d = w - x;
                d.re / d.norm_sqr()
            }
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            TestFunction::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, &a)| acc * x + k as f64 * a),
            TestFunction::Exp(t) => t * (t * x).exp(),
            TestFunction::Cos(t) => -t * (t * x).sin(),
            TestFunction::Resolvent(w) => {
                let d = w - x;
                (1.0 / (d * d)).re
            }
        }
    }

    /// Holomorphic extension to complex arguments.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        match self {
            TestFunction::Polynomial(c) => c
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a),
            TestFunction::Exp(t) => (z * t).exp(),
            TestFunction::Cos(t) => (z * t).cos(),
            TestFunction::Resolvent(w) => 0.5 * (1.0 / (w - z) + 1.0 / (w.conj() - z)),
        }
    }

    /// Poles of the holomorphic extension (empty for entire functions).
    pub fn poles(&self) -> Vec<Complex64> {
        match self {
            TestFunction::Resolvent(w) => vec![*w, w.conj()],
            _ => Vec::new(),
        }
    }

    /// ψ₀..ψ_L: exact for polynomials, trapezoid quadrature otherwise.
    pub fn psi(&self, l_max: usize) -> Result<PsiCoefficients> {
        match self {
            TestFunction::Polynomial(_) => {
                let exact = psi_exact_poly(self)?;
                exact.truncate(l_max)
            }
            _ => psi(self, l_max),
        }
    }

    /// Short label; parses back through [`FromStr`].
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Polynomial(c) if is_monomial(c) => match c.len() - 1 {
                1 => write!(f, "x"),
                d => write!(f, "x^{d}"),
            },
            TestFunction::Polynomial(c) => {
                write!(f, "poly:")?;
                for (i, v) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
            TestFunction::Exp(t) => write!(f, "exp:{t}"),
            TestFunction::Cos(t) => write!(f, "cos:{t}"),
            TestFunction::Resolvent(w) => write!(f, "resolvent:{},{}", w.re, w.im),
        }
    }
}

fn is_monomial(c: &[f64]) -> bool {
    c.len() >= 2 && c[c.len() - 1] == 1.0 && c[..c.len() - 1].iter().all(|&v| v == 0.0)
}

fn parse_numbers(input: &str, body: &str) -> Result<Vec<f64>> {
    body.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|e| Error::Parse {
                what: "test function",
                input: input.to_string(),
                reason: e.to_string(),
            })
        })
        .collect()
}

impl FromStr for TestFunction {
    type Err = Error;

    /// `poly:c0,c1,...`, `exp:t`, `cos:t`, `resolvent:re,im`, or the
    /// shorthands `x` and `x^d`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |reason: &str| Error::Parse {
            what: "test function",
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if s == "x" {
            return Ok(TestFunction::monomial(1));
        }
        if let Some(d) = s.strip_prefix("x^") {
            let d: usize = d.parse().map_err(|_| bad("bad exponent"))?;
            if d > MAX_POLY_DEGREE {
                return Err(bad("degree too high"));
            }
            return Ok(TestFunction::monomial(d));
        }
        let (kind, body) = s.split_once(':').ok_or_else(|| bad("expected <kind>:<params>"))?;
        let nums = parse_numbers(s, body)?;
        match kind {
            "poly" => TestFunction::polynomial(nums),
            "exp" | "cos" => {
                let [t] = nums[..] else {
                    return Err(bad("expected a single parameter"));
                };
                if kind == "exp" {
                    TestFunction::exp(t)
                } else {
                    TestFunction::cos(t)
                }
            }
            "resolvent" => {
                let [re, im] = nums[..] else {
                    return Err(bad("expected re,im"));
                };
                TestFunction::resolvent(Complex64::new(re, im))
            }
            _ => Err(bad("unknown kind")),
        }
    }
}

impl From<TestFunction> for String {
    fn from(f: TestFunction) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for TestFunction {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

const KIND_PREFIXES: [&str; 4] = ["poly:", "exp:", "cos:", "resolvent:"];

/// Splits a comma- or semicolon-separated list of function specs. Bare
/// numbers continue the parameter list of the preceding spec, so
/// `poly:0,0,1,exp:0.5` yields two functions.
pub fn parse_function_list(input: &str) -> Result<Vec<TestFunction>> {
    let mut specs: Vec<String> = Vec::new();
    for group in input.split(';') {
        let mut started = false;
        for token in group.split(',') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            let starts_spec = token == "x"
                || token.starts_with("x^")
                || KIND_PREFIXES.iter().any(|p| token.starts_with(p));
            if starts_spec || !started {
                specs.push(token.to_string());
                started = true;
            } else {
                let last = specs.last_mut().expect("started");
                last.push(',');
                last.push_str(token);
            }
        }
    }
    if specs.is_empty() {
        return Err(Error::Parse {
            what: "function list",
            input: input.to_string(),
            reason: "no functions given".into(),
        });
    }
    specs.iter().map(|s| s.parse()).collect()
}

/// ψ₀..ψ_L with a decay diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiCoefficients {
    pub values: Vec<f64>,
    /// `max |ψ_l|` over the last quarter of the computed indices.
    pub tail_estimate: f64,
}

impl PsiCoefficients {
    fn from_values(values: Vec<f64>) -> Self {
        let tail_estimate = tail_of(&values);
        PsiCoefficients {
            values,
            tail_estimate,
        }
    }

    pub fn truncation(&self) -> usize {
        self.values.len() - 1
    }

    /// `ψ_l`, zero beyond the truncation.
    pub fn get(&self, l: usize) -> f64 {
        self.values.get(l).copied().unwrap_or(0.0)
    }

    /// Restricts to ψ₀..ψ_L (zero-padding when shorter); fails if a dropped
    /// coefficient exceeds the tail threshold.
    pub fn truncate(mut self, l_max: usize) -> Result<Self> {
        let dropped = self
            .values
            .iter()
            .skip(l_max + 1)
            .fold(0.0f64, |m, v| m.max(v.abs()));
        if dropped > TAIL_THRESHOLD {
            return Err(Error::TailNotDecayed {
                tail: dropped,
                threshold: TAIL_THRESHOLD,
            });
        }
        self.values.resize(l_max + 1, 0.0);
        self.tail_estimate = tail_of(&self.values).max(dropped);
        Ok(self)
    }
}

fn tail_of(values: &[f64]) -> f64 {
    let len = values.len();
    let count = len.div_ceil(4).max(1);
    values[len - count..]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `T_l(s)` by the three-term recurrence.
pub fn chebyshev_t(l: usize, s: f64) -> f64 {
    match l {
        0 => 1.0,
        1 => s,
        _ => {
            let (mut t0, mut t1) = (1.0, s);
            for _ in 2..=l {
                let t2 = 2.0 * s * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
            t1
        }
    }
}

/// Number of trapezoid nodes for truncation order `l_max`.
pub fn theta_nodes(l_max: usize) -> usize {
    (8 * l_max).max(4096)
}

/// ψ₀..ψ_L from the θ-form by the composite trapezoid rule on `[-π, π)`.
///
/// Nodes are `θ_k = -π + 2πk/N`, so `e^{ilθ_k} = (-1)^l e^{2πi(lk mod N)/N}`
/// is read from a table with exact integer phase reduction, and the sums
/// are compensated.
pub fn psi(f: &TestFunction, l_max: usize) -> Result<PsiCoefficients> {
    let n = theta_nodes(l_max);
    let twiddle = twiddle_table(n);
    // cos θ_k = -cos(2πk/N)
    let samples: Vec<f64> = twiddle.iter().map(|w| f.eval(-2.0 * w.re)).collect();
    let mut values = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        let (mut re, mut im) = (Compensated::default(), Compensated::default());
        for (k, &fv) in samples.iter().enumerate() {
            let w = twiddle[(l * k) % n];
            re.add(fv * w.re);
            im.add(fv * w.im);
        }
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let (re, im) = (sign * re.value() / n as f64, sign * im.value() / n as f64);
        if im.abs() > IMAGINARY_THRESHOLD {
            return Err(Error::ImaginaryResidue {
                residue: im.abs(),
                threshold: IMAGINARY_THRESHOLD,
            });
        }
        values.push(re);
    }
    let out = PsiCoefficients::from_values(values);
    if out.tail_estimate > TAIL_THRESHOLD {
        return Err(Error::TailNotDecayed {
            tail: out.tail_estimate,
            threshold: TAIL_THRESHOLD,
        });
    }
    Ok(out)
}

/// `e^{2πim/N}` for `m < N`, `N` a multiple of 4, built from one quadrant
/// so that the table has the exact symmetries of the circle.
fn twiddle_table(n: usize) -> Vec<Complex64> {
    debug_assert!(n.is_multiple_of(4));
    let q = n / 4;
    // cos(2πm/N) on the first quadrant, via sin near the top for accuracy.
    let quarter: Vec<f64> = (0..=q)
        .map(|m| {
            if 2 * m <= q {
                (2.0 * PI * m as f64 / n as f64).cos()
            } else {
                (2.0 * PI * (q - m) as f64 / n as f64).sin()
            }
        })
        .collect();
    (0..n)
        .map(|m| {
            let (mm, sin_sign) = if m > n / 2 { (n - m, -1.0) } else { (m, 1.0) };
            let cos = if mm <= q { quarter[mm] } else { -quarter[n / 2 - mm] };
            let sin = quarter[q.abs_diff(mm)];
            Complex64::new(cos, sin_sign * sin)
        })
        .collect()
}

/// Neumaier compensated accumulator.
#[derive(Default)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// ψ₀..ψ_L from the s-form by Chebyshev–Gauss quadrature with `nodes`
/// points: `(1/π)∫ g(s)/√(1-s²) ds ≈ (1/N) Σ g(s_k)`.
pub fn psi_chebyshev_gauss(f: &TestFunction, l_max: usize, nodes: usize) -> Vec<f64> {
    let pts: Vec<(f64, f64)> = (1..=nodes)
        .map(|k| {
            let s = ((2 * k - 1) as f64 * PI / (2 * nodes) as f64).cos();
            (s, f.eval(2.0 * s))
        })
        .collect();
    (0..=l_max)
        .map(|l| pts.iter().map(|&(s, fv)| fv * chebyshev_t(l, s)).sum::<f64>() / nodes as f64)
        .collect()
}

/// Exact ψ for a polynomial: expand `f(2s)` in `{T_j}` and halve every
/// coefficient but the zeroth.
pub fn psi_exact_poly(f: &TestFunction) -> Result<PsiCoefficients> {
    let TestFunction::Polynomial(coeffs) = f else {
        return Err(Error::InvalidParameter(format!("{f} is not a polynomial")));
    };
    let degree = coeffs.len() - 1;
    if degree > MAX_POLY_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "polynomial degree {degree} exceeds {MAX_POLY_DEGREE}"
        )));
    }
    // Horner in the Chebyshev basis: acc ← s·acc + 2^k c_k, where
    // s·T_0 = T_1 and s·T_j = (T_{j+1} + T_{j-1})/2.
    let mut acc = vec![0.0; degree + 1];
    let mut scale = 2f64.powi(degree as i32);
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if k < degree {
            let mut next = vec![0.0; degree + 1];
            for (j, &a) in acc.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                if j == 0 {
                    next[1] += a;
                } else {
                    next[j + 1] += 0.5 * a;
                    next[j - 1] += 0.5 * a;
                }
            }
            acc = next;
        }
        acc[0] += scale * c;
        scale /= 2.0;
    }
    let values = acc
        .iter()
        .enumerate()
        .map(|(l, &a)| if l == 0 { a } else { 0.5 * a })
        .collect();
    Ok(PsiCoefficients::from_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_psi(p: &PsiCoefficients, expected: &[(usize, f64)], tol: f64) {
        for l in 0..p.values.len() {
            let want = expected
                .iter()
                .find(|(i, _)| *i == l)
                .map(|(_, v)| *v)
                .unwrap_or(0.0);
            assert!((p.values[l] - want).abs() <= tol, "ψ_{l} = {} != {want}", p.values[l]);
        }
    }

    #[test]
    fn chebyshev_values() {
        assert_eq!(chebyshev_t(0, 0.3), 1.0);
        assert!((chebyshev_t(2, 0.5) + 0.5).abs() < 1e-15);
        assert!((chebyshev_t(5, 0.3f64.cos()) - 1.5f64.cos()).abs() < 1e-12);
        for l in 0..40 {
            let th: f64 = 0.77;
            assert!((chebyshev_t(l, th.cos()) - (l as f64 * th).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_quadrature_on_monomials() {
        let p = psi(&TestFunction::monomial(2), 16).unwrap();
        assert_psi(&p, &[(0, 2.0), (2, 1.0)], 1e-13);
        let p = psi(&TestFunction::monomial(4), 16).unwrap();
        assert_psi(&p, &[(0, 6.0), (2, 4.0), (4, 1.0)], 1e-13);
        let p = psi(&TestFunction::constant(1.0), 16).unwrap();
        assert_psi(&p, &[(0, 1.0)], 1e-14);
    }

    #[test]
    fn psi_exact_cases() {
        let p = psi_exact_poly(&TestFunction::monomial(1)).unwrap();
        assert_psi(&p, &[(1, 1.0)], 0.0);
        let p = psi_exact_poly(&TestFunction::monomial(3)).unwrap();
        assert_psi(&p, &[(1, 3.0), (3, 1.0)], 0.0);
        let p = psi_exact_poly(&TestFunction::constant(2.5)).unwrap();
        assert_psi(&p, &[(0, 2.5)], 0.0);
        let p = psi_exact_poly(&TestFunction::monomial(4)).unwrap();
        assert_psi(&p, &[(0, 6.0), (2, 4.0), (4, 1.0)], 0.0);
    }

    #[test]
    fn exact_and_quadrature_agree_through_degree_16() {
        for d in 0..=16 {
            let f = TestFunction::monomial(d);
            let a = psi_exact_poly(&f).unwrap().truncate(24).unwrap();
            let b = psi(&f, 24).unwrap();
            for l in 0..=24 {
                assert!((a.values[l] - b.values[l]).abs() < 1e-12, "d={d} l={l}");
            }
        }
    }

    #[test]
    fn theta_and_s_forms_agree() {
        for f in [
            TestFunction::exp(0.5).unwrap(),
            TestFunction::cos(1.3).unwrap(),
            TestFunction::resolvent(Complex64::new(0.4, 1.0)).unwrap(),
        ] {
            let a = psi(&f, DEFAULT_L).unwrap();
            let b = psi_chebyshev_gauss(&f, DEFAULT_L, 2048);
            for (l, (x, y)) in a.values.iter().zip(&b).enumerate() {
                assert!((x - y).abs() < 1e-10, "{f} l={l}");
            }
        }
    }

    #[test]
    fn exp_tail_decays() {
        let f = TestFunction::exp(1.0).unwrap();
        let tails: Vec<f64> = [16usize, 32, 64]
            .iter()
            .map(|&l| psi(&f, l).map(|p| p.tail_estimate).unwrap_or(f64::INFINITY))
            .collect();
        assert!(tails[0] > tails[1] && tails[1] > tails[2], "{tails:?}");
        // exp(4x) needs more than 8 terms.
        assert!(matches!(
            psi(&TestFunction::exp(4.0).unwrap(), 8),
            Err(Error::TailNotDecayed { .. })
        ));
    }

    #[test]
    fn truncating_a_polynomial_too_early_fails() {
        let p = psi_exact_poly(&TestFunction::monomial(6)).unwrap();
        assert!(matches!(p.truncate(4), Err(Error::TailNotDecayed { .. })));
    }

    #[test]
    fn parse_and_display() {
        let f: TestFunction = "poly:1,0,2".parse().unwrap();
        assert_eq!(f, TestFunction::Polynomial(vec![1.0, 0.0, 2.0]));
        assert_eq!(f.to_string().parse::<TestFunction>().unwrap(), f);
        assert_eq!("exp:0.5".parse::<TestFunction>().unwrap(), TestFunction::Exp(0.5));
        assert_eq!("x^3".parse::<TestFunction>().unwrap(), TestFunction::monomial(3));
        assert!("resolvent:1,0".parse::<TestFunction>().is_err());
        assert!("resolvent:3,0".parse::<TestFunction>().is_ok());
        assert!("wavelet:1".parse::<TestFunction>().is_err());
        let list = parse_function_list("poly:0,0,1,exp:0.5,resolvent:0,1.5;x").unwrap();
        assert_eq!(list.len(), 4);
        assert_eq!(list[0], TestFunction::monomial(2));
        assert_eq!(list[2], TestFunction::Resolvent(Complex64::new(0.0, 1.5)));
        assert_eq!(list[3], TestFunction::monomial(1));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for f in [
            TestFunction::polynomial(vec![1.0, -2.0, 0.5, 3.0]).unwrap(),
            TestFunction::exp(0.7).unwrap(),
            TestFunction::cos(1.1).unwrap(),
            TestFunction::resolvent(Complex64::new(-0.5, 0.8)).unwrap(),
        ] {
            for x in [-1.9, -0.3, 0.0, 1.2] {
                let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
                assert!((fd - f.derivative(x)).abs() < 1e-7 * (1.0 + fd.abs()), "{f} at {x}");
                let zc = f.eval_complex(Complex64::new(x, 0.0));
                assert!((zc.re - f.eval(x)).abs() < 1e-14 && zc.im.abs() < 1e-14);
            }
        }
    }

    fn small_poly() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-2.0..2.0f64, 1..=9)
    }

    proptest! {
        #[test]
        fn psi_is_linear(pf in small_poly(), pg in small_poly(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
            let len = pf.len().max(pg.len());
            let combo: Vec<f64> = (0..len)
                .map(|i| a * pf.get(i).copied().unwrap_or(0.0) + b * pg.get(i).copied().unwrap_or(0.0))
                .collect();
            let f = TestFunction::polynomial(pf).unwrap();
            let g = TestFunction::polynomial(pg).unwrap();
            let h = TestFunction::polynomial(combo).unwrap();
            let (pf, pg, ph) = (psi(&f, 12).unwrap(), psi(&g, 12).unwrap(), psi(&h, 12).unwrap());
            for l in 0..=12 {
                let lin = a * pf.values[l] + b * pg.values[l];
                prop_assert!((ph.values[l] - lin).abs() <= 1e-12);
            }
        }
    }
}
