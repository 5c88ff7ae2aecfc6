//! Double-double arithmetic and a radix-2 FFT over it.
//!
//! Used where two independent evaluations of the same discrete sum have to
//! agree far below f64 rounding, e.g. relative comparisons of matrix entries
//! that are ten orders of magnitude below the largest one.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self - Dd::from_f64(b).mul_f64(q1);
        let q2 = r.hi / b;
        let r = r - Dd::from_f64(b).mul_f64(q2);
        let q3 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

/// Complex number with double-double parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };

    pub fn new(re: Dd, im: Dd) -> Self {
        Cdd { re, im }
    }

    pub fn from_c64(z: Complex64) -> Self {
        Cdd { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn conj(self) -> Cdd {
        Cdd { re: self.re, im: -self.im }
    }

    #[inline]
    pub fn scale(self, s: f64) -> Cdd {
        Cdd { re: self.re.mul_f64(s), im: self.im.mul_f64(s) }
    }

    #[inline]
    pub fn scale_dd(self, s: Dd) -> Cdd {
        Cdd { re: self.re * s, im: self.im * s }
    }

    /// Multiply by i^q.
    #[inline]
    pub fn rot90(self, q: usize) -> Cdd {
        match q % 4 {
            0 => self,
            1 => Cdd { re: -self.im, im: self.re },
            2 => Cdd { re: -self.re, im: -self.im },
            _ => Cdd { re: self.im, im: -self.re },
        }
    }

    #[inline]
    pub fn neg_if(self, flip: bool) -> Cdd {
        if flip {
            Cdd { re: -self.re, im: -self.im }
        } else {
            self
        }
    }
}

impl Add for Cdd {
    type Output = Cdd;
    #[inline]
    fn add(self, b: Cdd) -> Cdd {
        Cdd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl AddAssign for Cdd {
    #[inline]
    fn add_assign(&mut self, b: Cdd) {
        *self = *self + b;
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    #[inline]
    fn sub(self, b: Cdd) -> Cdd {
        Cdd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    #[inline]
    fn mul(self, b: Cdd) -> Cdd {
        Cdd {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

fn sin_cos_taylor(x: Dd) -> (Dd, Dd) {
    let x2 = x * x;
    let mut term = x;
    let mut sin = x;
    let mut k = 1.0;
    for _ in 0..20 {
        term = -(term * x2).div_f64((k + 1.0) * (k + 2.0));
        k += 2.0;
        sin += term;
        if term.hi.abs() < 1e-34 {
            break;
        }
    }
    let mut term = Dd::ONE;
    let mut cos = Dd::ONE;
    let mut k = 0.0;
    for _ in 0..20 {
        term = -(term * x2).div_f64((k + 1.0) * (k + 2.0));
        k += 2.0;
        cos += term;
        if term.hi.abs() < 1e-34 {
            break;
        }
    }
    (sin, cos)
}

/// `e^{-2 pi i k / m}` for `k = 0..m`, `m` a multiple of 8.
pub fn roots_of_unity(m: usize) -> Vec<Cdd> {
    assert!(m >= 8 && m % 8 == 0, "root table size must be a multiple of 8");
    let quarter = m / 4;
    let eighth = m / 8;
    // cos/sin of 2 pi j / m for j in 0..=quarter
    let mut cs = vec![(Dd::ZERO, Dd::ZERO); quarter + 1];
    for j in 0..=eighth {
        let x = Dd::PI.mul_f64(2.0 * j as f64 / m as f64);
        let (s, c) = sin_cos_taylor(x);
        cs[j] = (c, s);
        cs[quarter - j] = (s, c);
    }
    (0..m)
        .map(|k| {
            let q = k / quarter;
            let r = k % quarter;
            let (c, s) = cs[r];
            // e^{+i theta} then rotated by i^q, conjugated for the negative sign
            Cdd::new(c, s).rot90(q).conj()
        })
        .collect()
}

/// Unnormalized radix-2 FFT in double-double.
pub struct DdFft {
    n: usize,
    roots: Vec<Cdd>,
    rev: Vec<usize>,
}

impl DdFft {
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "fft length must be a power of two");
        let bits = n.trailing_zeros();
        let rev = (0..n)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        let roots = if n >= 8 { roots_of_unity(n) } else { roots_of_unity(8) };
        DdFft { n, roots, rev }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In place; `inverse` flips the exponent sign, no 1/n factor.
    pub fn process(&self, data: &mut [Cdd], inverse: bool) {
        let n = self.n;
        assert_eq!(data.len(), n);
        for i in 0..n {
            let j = self.rev[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let table_len = self.roots.len();
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = table_len / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let mut w = self.roots[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let u = data[start + k];
                    let v = data[start + k + half] * w;
                    data[start + k] = u + v;
                    data[start + k + half] = u - v;
                }
            }
            len <<= 1;
        }
    }
}

/// 2-D transform of a row-major `rows x cols` array.
pub fn fft2(data: &mut [Cdd], rows: usize, cols: usize, inverse: bool) {
    let fr = DdFft::new(cols);
    for r in data.chunks_mut(cols) {
        fr.process(r, inverse);
    }
    let fc = DdFft::new(rows);
    let mut col = vec![Cdd::ZERO; rows];
    for c in 0..cols {
        for r in 0..rows {
            col[r] = data[r * cols + c];
        }
        fc.process(&mut col, inverse);
        for r in 0..rows {
            data[r * cols + c] = col[r];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_match_libm() {
        let r = roots_of_unity(64);
        for (k, z) in r.iter().enumerate() {
            let t = -2.0 * std::f64::consts::PI * k as f64 / 64.0;
            assert!((z.re.to_f64() - t.cos()).abs() < 1e-15);
            assert!((z.im.to_f64() - t.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn roots_are_unit_to_double_double() {
        for z in roots_of_unity(256) {
            let m = z.re * z.re + z.im * z.im - Dd::ONE;
            assert!(m.to_f64().abs() < 1e-30);
        }
    }

    #[test]
    fn product_carries_low_part() {
        let a = Dd::from_f64(1.0 + f64::EPSILON);
        let p = a * a;
        assert_eq!(p.hi, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(p.lo, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn fft_matches_naive_sum() {
        let n = 32;
        let x: Vec<Cdd> = (0..n)
            .map(|k| Cdd::from_c64(Complex64::new((k as f64 * 0.37).sin(), (k as f64).cos())))
            .collect();
        let mut y = x.clone();
        DdFft::new(n).process(&mut y, false);
        for l in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let t = -2.0 * std::f64::consts::PI * (k * l) as f64 / n as f64;
                s += x[k].to_c64() * Complex64::new(t.cos(), t.sin());
            }
            assert!((s - y[l].to_c64()).norm() < 1e-12);
        }
        DdFft::new(n).process(&mut y, true);
        for k in 0..n {
            let back = y[k].scale(1.0 / n as f64);
            assert!((back - x[k]).re.to_f64().abs() < 1e-30);
        }
    }
}
