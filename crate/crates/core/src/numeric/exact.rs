use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Backend, Exact, Matrix, Scalar, Tolerances};
use crate::error::{Error, Result};

type GaussInt = Complex<BigInt>;

/// Largest norm of a constant term whose Gaussian divisors we are willing to
/// enumerate.
const MAX_DIVISOR_NORM: u128 = 1_000_000_000_000;

impl Scalar for Exact {
    const BACKEND: Backend = Backend::Exact;
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }

    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(v.into()), BigRational::zero())
    }

    fn from_exact(v: &Exact) -> Self {
        v.clone()
    }

    fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn magnitude(&self) -> f64 {
        self.to_complex64().norm()
    }

    fn pivot_score(&self) -> f64 {
        if Scalar::is_zero(self) {
            0.0
        } else {
            1.0
        }
    }

    fn mul_sub_assign(&mut self, a: &Self, b: &Self) {
        if a.im.is_zero() && b.im.is_zero() {
            self.re -= &a.re * &b.re;
        } else {
            self.re -= &a.re * &b.re - &a.im * &b.im;
            self.im -= &a.re * &b.im + &a.im * &b.re;
        }
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        if a.im.is_zero() && b.im.is_zero() {
            self.re += &a.re * &b.re;
        } else {
            self.re += &a.re * &b.re - &a.im * &b.im;
            self.im += &a.re * &b.im + &a.im * &b.re;
        }
    }

    fn text(&self) -> String {
        format_exact(self)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_exact(self))
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn matrix_rank(m: &Matrix<Self>, _tol: &Tolerances) -> usize {
        rank_fraction_free(m)
    }

    fn matrix_eigenvalues(m: &Matrix<Self>, _tol: &Tolerances) -> Result<Vec<Self>> {
        let poly = characteristic_polynomial(m);
        gaussian_rational_roots(&poly)
    }
}

fn format_exact(z: &Exact) -> String {
    let im_text = |v: &BigRational| -> String {
        if v.is_one() {
            "i".to_string()
        } else if (-v).is_one() {
            "-i".to_string()
        } else {
            format!("{v}i")
        }
    };
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => im_text(&z.im),
        (false, false) => {
            let im = im_text(&z.im);
            if im.starts_with('-') {
                format!("{}{}", z.re, im)
            } else {
                format!("{}+{}", z.re, im)
            }
        }
    }
}

/// Largest decimal exponent accepted in `1.5e-3` style literals.
const MAX_EXPONENT: u32 = 400;

fn syntax_error(text: &str) -> Error {
    let mut shown: String = text.chars().take(64).collect();
    if shown.len() < text.len() {
        shown.push('…');
    }
    Error::ScalarSyntax(shown)
}

fn parse_rational(s: &str, whole: &str) -> Result<BigRational> {
    let err = || syntax_error(whole);
    if let Some((mantissa, exponent)) = s.split_once(['e', 'E']) {
        let (negative, digits) = match exponent.as_bytes().first() {
            Some(b'-') => (true, &exponent[1..]),
            Some(b'+') => (false, &exponent[1..]),
            _ => (false, exponent),
        };
        if digits.is_empty() || digits.len() > 4 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let e: u32 = digits.parse().map_err(|_| err())?;
        if e > MAX_EXPONENT || mantissa.contains('/') {
            return Err(err());
        }
        let base = parse_rational(mantissa, whole)?;
        let scale = BigRational::from_integer(BigInt::from(10).pow(e));
        return Ok(if negative { base / scale } else { base * scale });
    }
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let digits = |t: &str| -> Result<BigInt> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        BigInt::parse_bytes(t.as_bytes(), 10).ok_or_else(err)
    };
    let value = if let Some((num, den)) = body.split_once('/') {
        let den = digits(den)?;
        if den.is_zero() {
            return Err(err());
        }
        BigRational::new(digits(num)?, den)
    } else if let Some((int, frac)) = body.split_once('.') {
        if int.is_empty() && frac.is_empty() {
            return Err(err());
        }
        let int = if int.is_empty() { BigInt::zero() } else { digits(int)? };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac = if frac.is_empty() { BigInt::zero() } else { digits(frac)? };
        BigRational::new(int * &scale + frac, scale)
    } else {
        BigRational::from_integer(digits(body)?)
    };
    Ok(if negative { -value } else { value })
}

/// Parses the exact scalar syntax: `a`, `a/b`, `a/b+c/di`, `-i`, `3/4i`, with
/// optional signs and whitespace. Decimal literals such as `0.25` or `1e-3`
/// are read exactly.
pub fn parse_exact(text: &str) -> Result<Exact> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() || s.len() > 10_000 {
        return Err(syntax_error(text));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex::new(parse_rational(&s, text)?, BigRational::zero()));
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(k) => (parse_rational(&body[..k], text)?, &body[k..]),
        None => (BigRational::zero(), body),
    };
    let im = match im {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        other => parse_rational(other, text)?,
    };
    Ok(Complex::new(re, im))
}

fn gauss_is_zero(z: &GaussInt) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

fn gauss_norm(z: &GaussInt) -> BigInt {
    &z.re * &z.re + &z.im * &z.im
}

/// Exact quotient `a / b` in the Gaussian integers, `None` if `b ∤ a`.
fn gauss_div_exact(a: &GaussInt, b: &GaussInt) -> Option<GaussInt> {
    let n = gauss_norm(b);
    let re = &a.re * &b.re + &a.im * &b.im;
    let im = &a.im * &b.re - &a.re * &b.im;
    let (qr, rr) = re.div_rem(&n);
    let (qi, ri) = im.div_rem(&n);
    (rr.is_zero() && ri.is_zero()).then(|| Complex::new(qr, qi))
}

fn lcm_of_denominators<'a>(values: impl Iterator<Item = &'a Exact>) -> BigInt {
    values.fold(BigInt::one(), |acc, z| acc.lcm(z.re.denom()).lcm(z.im.denom()))
}

fn to_gauss_int(z: &Exact, scale: &BigInt) -> GaussInt {
    let re = &z.re * BigRational::from_integer(scale.clone());
    let im = &z.im * BigRational::from_integer(scale.clone());
    debug_assert!(re.is_integer() && im.is_integer());
    Complex::new(re.to_integer(), im.to_integer())
}

/// Rank by Bareiss fraction-free elimination over the Gaussian integers.
///
/// Each row is first scaled by the lcm of its denominators. Every division
/// performed afterwards is exact (Sylvester's identity).
pub fn rank_fraction_free(m: &Matrix<Exact>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<GaussInt>> = (0..rows)
        .map(|r| {
            let scale = lcm_of_denominators(m.row(r).iter());
            m.row(r).iter().map(|z| to_gauss_int(z, &scale)).collect()
        })
        .collect();
    let mut prev: GaussInt = Complex::new(BigInt::one(), BigInt::zero());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !gauss_is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in bottom.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let num = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = gauss_div_exact(&num, &prev).expect("Bareiss division is exact");
            }
            row[c] = Complex::new(BigInt::zero(), BigInt::zero());
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

/// Coefficients `c_0, …, c_n` (lowest degree first, `c_n = 1`) of
/// `det(x·I − A)`, by the Faddeev–LeVerrier recurrence.
pub fn characteristic_polynomial(a: &Matrix<Exact>) -> Vec<Exact> {
    let n = a.rows();
    let mut coeffs = vec![<Exact as Scalar>::zero(); n + 1];
    coeffs[n] = <Exact as Scalar>::one();
    let mut m = Matrix::<Exact>::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m);
        m.add_scaled_identity(0, 0, n, &coeffs[n - k + 1]);
        let t = a.mul(&m).trace();
        coeffs[n - k] = -t / <Exact as Scalar>::from_i64(k as i64);
    }
    coeffs
}

/// Associate-class representatives (`re > 0`, `im ≥ 0`) of the Gaussian
/// divisors of `z ≠ 0`.
fn gaussian_divisors(z: &GaussInt) -> Result<Vec<GaussInt>> {
    let norm = gauss_norm(z)
        .to_u128()
        .filter(|&n| n <= MAX_DIVISOR_NORM)
        .ok_or_else(|| Error::ExactFactorizationFailure("constant term too large to factor".into()))?;
    let mut int_divisors = Vec::new();
    let mut k: u128 = 1;
    while k * k <= norm {
        if norm % k == 0 {
            int_divisors.push(k);
            if k * k != norm {
                int_divisors.push(norm / k);
            }
        }
        k += 1;
    }
    int_divisors.sort_unstable();
    let mut out = Vec::new();
    for d in int_divisors {
        let mut a: u128 = 1;
        while a * a <= d {
            let rest = d - a * a;
            let b = rest.sqrt();
            if b * b == rest {
                let cand = Complex::new(BigInt::from(a), BigInt::from(b));
                if gauss_div_exact(z, &cand).is_some() {
                    out.push(cand);
                }
            }
            a += 1;
        }
    }
    Ok(out)
}

fn horner(coeffs: &[GaussInt], x: &GaussInt) -> GaussInt {
    coeffs
        .iter()
        .rev()
        .fold(Complex::new(BigInt::zero(), BigInt::zero()), |acc, c| acc * x + c)
}

/// Divides a monic integer polynomial by `(y − root)`; returns the quotient
/// when the remainder vanishes.
fn deflate(coeffs: &[GaussInt], root: &GaussInt) -> Option<Vec<GaussInt>> {
    let n = coeffs.len() - 1;
    let mut q = vec![Complex::new(BigInt::zero(), BigInt::zero()); n];
    let mut carry = Complex::new(BigInt::zero(), BigInt::zero());
    for k in (0..n).rev() {
        carry = &coeffs[k + 1] + &carry * root;
        q[k] = carry.clone();
    }
    let rem = &coeffs[0] + &carry * root;
    gauss_is_zero(&rem).then_some(q)
}

/// All roots with multiplicity of a monic polynomial with Gaussian-rational
/// coefficients, provided it splits into linear factors over `Q(i)`.
///
/// Substituting `x = y / D`, with `D` clearing every denominator, yields a
/// monic polynomial over `Z[i]`; its roots in `Q(i)` are Gaussian integers
/// dividing the constant term.
fn gaussian_rational_roots(poly: &[Exact]) -> Result<Vec<Exact>> {
    let degree = poly.len() - 1;
    debug_assert!(poly[degree] == <Exact as Scalar>::one());
    let d = lcm_of_denominators(poly.iter());
    let mut q: Vec<GaussInt> = (0..=degree)
        .map(|k| to_gauss_int(&poly[k], &num_traits::pow(d.clone(), degree - k)))
        .collect();
    let mut roots = Vec::with_capacity(degree);
    let zero = Complex::new(BigInt::zero(), BigInt::zero());
    while q.len() > 1 && gauss_is_zero(&q[0]) {
        q.remove(0);
        roots.push(zero.clone());
    }
    if q.len() > 1 {
        let units = [
            Complex::new(BigInt::one(), BigInt::zero()),
            Complex::new(BigInt::zero(), BigInt::one()),
            Complex::new(-BigInt::one(), BigInt::zero()),
            Complex::new(BigInt::zero(), -BigInt::one()),
        ];
        for base in gaussian_divisors(&q[0])? {
            for u in &units {
                let cand = &base * u;
                while q.len() > 1 && gauss_is_zero(&horner(&q, &cand)) {
                    q = deflate(&q, &cand).expect("root leaves zero remainder");
                    roots.push(cand.clone());
                }
            }
        }
    }
    if q.len() > 1 {
        return Err(Error::ExactFactorizationFailure(format!(
            "{} of {} roots are not Gaussian rationals",
            q.len() - 1,
            degree
        )));
    }
    let d = BigRational::from_integer(d);
    Ok(roots
        .into_iter()
        .map(|y| Complex::new(BigRational::from_integer(y.re) / &d, BigRational::from_integer(y.im) / &d))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Exact {
        parse_exact(s).unwrap()
    }

    #[test]
    fn parses_and_formats() {
        for (input, expected) in [
            ("-1/2+3/4i", "-1/2+3/4i"),
            ("2", "2"),
            ("4/2", "2"),
            ("i", "i"),
            ("-i", "-i"),
            ("3/4i", "3/4i"),
            ("1 - 2i", "1-2i"),
            ("0.25", "1/4"),
            ("+7", "7"),
            ("0", "0"),
            ("1+i", "1+i"),
            ("1e5", "100000"),
            ("2.5E-1", "1/4"),
            ("1+2e-1i", "1+1/5i"),
            ("-1e+2-3e0i", "-100-3i"),
        ] {
            assert_eq!(q(input).text(), expected, "input {input}");
        }
        for bad in ["", "1/0", "a", "1/-2", "ii", "--1", "1+", "/", ".", "1e", "1e401", "1/2e3", "e5", "1_0"] {
            assert!(parse_exact(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let ev = |rows: &[&[i64]]| {
            let mut v: Vec<String> =
                Matrix::<Exact>::from_i64(rows).eigenvalues().unwrap().iter().map(Scalar::text).collect();
            v.sort();
            v
        };
        assert_eq!(ev(&[&[2, 0], &[0, 3]]), ["2", "3"]);
        assert_eq!(ev(&[&[0, 1], &[0, 0]]), ["0", "0"]);
        assert_eq!(ev(&[&[0, -1], &[1, 0]]), ["-i", "i"]);
    }

    #[test]
    fn rational_and_gaussian_roots() {
        // diag(1/2, 2+i, 2+i) conjugated by an integer unimodular matrix.
        let d = Matrix::<Exact>::from_rows(vec![
            vec![q("1/2"), q("0"), q("0")],
            vec![q("0"), q("2+i"), q("1")],
            vec![q("0"), q("0"), q("2+i")],
        ])
        .unwrap();
        let s = Matrix::<Exact>::from_i64(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let s_inv = s.inverse(&Tolerances::default()).unwrap();
        let a = s.mul(&d).mul(&s_inv);
        let mut ev: Vec<String> = a.eigenvalues().unwrap().iter().map(Scalar::text).collect();
        ev.sort();
        assert_eq!(ev, ["1/2", "2+i", "2+i"]);
    }

    #[test]
    fn irrational_roots_fail() {
        let m = Matrix::<Exact>::from_i64(&[&[0, 2], &[1, 0]]);
        assert!(matches!(m.eigenvalues(), Err(Error::ExactFactorizationFailure(_))));
    }

    #[test]
    fn characteristic_polynomial_of_companion() {
        // x^2 - 3x + 2
        let m = Matrix::<Exact>::from_i64(&[&[0, -2], &[1, 3]]);
        let p: Vec<String> = characteristic_polynomial(&m).iter().map(Scalar::text).collect();
        assert_eq!(p, ["2", "-3", "1"]);
    }

    #[test]
    fn fraction_free_rank_on_rational_rows() {
        let m = Matrix::<Exact>::from_rows(vec![
            vec![q("1/2"), q("1/3"), q("i")],
            vec![q("3/2"), q("1"), q("3i")],
            vec![q("0"), q("1/7"), q("0")],
        ])
        .unwrap();
        assert_eq!(rank_fraction_free(&m), 2);
    }
}
