//! Fixed-point decimal arithmetic on top of `BigInt`.
//!
//! A value is a mantissa scaled by `10^-scale`, so every operation works in
//! whole decimal digits and output truncation is reproducible. All rounding
//! is floor on the mantissa, which keeps each operation within one unit in
//! the last place; callers pick a working scale with enough guard digits for
//! their own error budget.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// A real number held as `mant * 10^-scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hp {
    mant: BigInt,
    scale: u32,
}

impl Hp {
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Hp {
        Hp {
            mant: self.mant.abs(),
            scale: self.scale,
        }
    }

    pub fn neg(&self) -> Hp {
        Hp {
            mant: -&self.mant,
            scale: self.scale,
        }
    }

    pub fn add(&self, other: &Hp) -> Hp {
        assert_eq!(self.scale, other.scale, "scale mismatch in add");
        Hp {
            mant: &self.mant + &other.mant,
            scale: self.scale,
        }
    }

    pub fn sub(&self, other: &Hp) -> Hp {
        assert_eq!(self.scale, other.scale, "scale mismatch in sub");
        Hp {
            mant: &self.mant - &other.mant,
            scale: self.scale,
        }
    }

    /// Exact multiplication by a machine integer.
    pub fn mul_int(&self, k: i64) -> Hp {
        Hp {
            mant: &self.mant * k,
            scale: self.scale,
        }
    }

    /// Floor division of the mantissa by a machine integer.
    pub fn div_int(&self, k: i64) -> Hp {
        assert!(k != 0);
        Hp {
            mant: self.mant.div_floor(&BigInt::from(k)),
            scale: self.scale,
        }
    }

    pub fn cmp_val(&self, other: &Hp) -> Ordering {
        assert_eq!(self.scale, other.scale, "scale mismatch in cmp");
        self.mant.cmp(&other.mant)
    }

    /// The value as an exact rational `mant / 10^scale`.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), pow10(self.scale))
    }

    /// Re-express at a different scale. Upscaling is exact, downscaling
    /// floors the mantissa.
    pub fn rescale(&self, scale: u32) -> Hp {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Hp {
                mant: &self.mant * pow10(scale - self.scale),
                scale,
            },
            Ordering::Less => Hp {
                mant: self.mant.div_floor(&pow10(self.scale - scale)),
                scale,
            },
        }
    }

    /// Decimal rendering truncated toward zero at `digits` fractional digits.
    pub fn to_decimal_trunc(&self, digits: u32) -> String {
        let shifted = if digits <= self.scale {
            // truncation toward zero, not floor
            let q = pow10(self.scale - digits);
            let (d, _r) = self.mant.div_rem(&q);
            d
        } else {
            &self.mant * pow10(digits - self.scale)
        };
        let neg = shifted.is_negative();
        let digits_str = shifted.abs().to_string();
        let (int_part, frac_part) = if digits == 0 {
            (digits_str, String::new())
        } else if digits_str.len() <= digits as usize {
            (
                "0".to_string(),
                format!("{:0>width$}", digits_str, width = digits as usize),
            )
        } else {
            let split = digits_str.len() - digits as usize;
            (digits_str[..split].to_string(), digits_str[split..].to_string())
        };
        let mut out = String::new();
        if neg && !(int_part == "0" && frac_part.chars().all(|c| c == '0')) {
            out.push('-');
        }
        out.push_str(&int_part);
        if digits > 0 {
            out.push('.');
            out.push_str(&frac_part);
        }
        out
    }
}

impl fmt::Display for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_trunc(self.scale))
    }
}

pub fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// Arithmetic context carrying the working scale.
#[derive(Clone, Debug)]
pub struct HpCtx {
    scale: u32,
    unit: BigInt,
}

impl HpCtx {
    pub fn new(scale: u32) -> Self {
        HpCtx {
            scale,
            unit: pow10(scale),
        }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn zero(&self) -> Hp {
        Hp {
            mant: BigInt::zero(),
            scale: self.scale,
        }
    }

    pub fn one(&self) -> Hp {
        Hp {
            mant: self.unit.clone(),
            scale: self.scale,
        }
    }

    pub fn from_int(&self, k: i64) -> Hp {
        Hp {
            mant: &self.unit * k,
            scale: self.scale,
        }
    }

    pub fn from_bigint(&self, k: &BigInt) -> Hp {
        Hp {
            mant: &self.unit * k,
            scale: self.scale,
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Hp {
        Hp {
            mant: (q.numer() * &self.unit).div_floor(q.denom()),
            scale: self.scale,
        }
    }

    /// num/den as a value without constructing (and normalizing) a
    /// rational; den may carry either sign but not zero.
    pub fn from_int_ratio(&self, num: BigInt, den: &BigInt) -> Hp {
        assert!(!den.is_zero());
        Hp {
            mant: (num * &self.unit).div_floor(den),
            scale: self.scale,
        }
    }

    /// `10^-digits` as a value, for tolerance thresholds.
    pub fn eps(&self, digits: u32) -> Hp {
        assert!(digits <= self.scale, "eps finer than working scale");
        Hp {
            mant: pow10(self.scale - digits),
            scale: self.scale,
        }
    }

    pub fn mul(&self, a: &Hp, b: &Hp) -> Hp {
        assert_eq!(a.scale, self.scale);
        assert_eq!(b.scale, self.scale);
        Hp {
            mant: (&a.mant * &b.mant).div_floor(&self.unit),
            scale: self.scale,
        }
    }

    pub fn div(&self, a: &Hp, b: &Hp) -> Option<Hp> {
        assert_eq!(a.scale, self.scale);
        assert_eq!(b.scale, self.scale);
        if b.mant.is_zero() {
            return None;
        }
        Some(Hp {
            mant: (&a.mant * &self.unit).div_floor(&b.mant),
            scale: self.scale,
        })
    }

    pub fn powi(&self, a: &Hp, mut e: u32) -> Hp {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `e^x` by direct Taylor summation. Terms are generated until they fall
    /// below one unit in the last place past the decreasing regime; the
    /// working scale must include headroom for the peak term magnitude.
    pub fn exp(&self, x: &Hp) -> Hp {
        assert_eq!(x.scale, self.scale);
        let mut term = self.one();
        let mut sum = self.one();
        // floor(|x|) + 1 bounds the index where terms start shrinking
        let x_ceil: u64 = {
            let a = x.mant.abs().div_floor(&self.unit);
            u64::try_from(&a).unwrap_or(u64::MAX / 4) + 1
        };
        let mut k: u64 = 1;
        loop {
            term = self.mul(&term, x);
            term = Hp {
                mant: term.mant.div_floor(&BigInt::from(k)),
                scale: self.scale,
            };
            sum = sum.add(&term);
            if k > 2 * x_ceil && term.mant.abs() <= BigInt::one() {
                break;
            }
            k += 1;
            assert!(
                k < 64 + 8 * (x_ceil + self.scale as u64),
                "exp series failed to converge"
            );
        }
        sum
    }

    /// Natural logarithm for strictly positive input.
    pub fn ln(&self, x: &Hp) -> Option<Hp> {
        assert_eq!(x.scale, self.scale);
        if !x.is_positive() {
            return None;
        }
        // bring the mantissa into [3/4, 3/2) with powers of two
        let mut m = x.clone();
        let mut e2: i64 = 0;
        let hi = Hp {
            mant: (&self.unit * 3u32).div_floor(&BigInt::from(2)),
            scale: self.scale,
        };
        let lo = Hp {
            mant: (&self.unit * 3u32).div_floor(&BigInt::from(4)),
            scale: self.scale,
        };
        while m.cmp_val(&hi) != Ordering::Less {
            m = Hp {
                mant: m.mant.div_floor(&BigInt::from(2)),
                scale: self.scale,
            };
            e2 += 1;
        }
        while m.cmp_val(&lo) == Ordering::Less {
            m = m.mul_int(2);
            e2 -= 1;
        }
        let ln_m = self.atanh_ln(&m);
        let ln2 = self.ln2();
        Some(ln_m.add(&ln2.mul_int(e2)))
    }

    /// ln of m in [3/4, 3/2) via 2*atanh((m-1)/(m+1)).
    fn atanh_ln(&self, m: &Hp) -> Hp {
        let one = self.one();
        let u = self
            .div(&m.sub(&one), &m.add(&one))
            .expect("m + 1 is positive");
        self.atanh_series(&u)
    }

    /// ln 2 = 2*atanh(1/3).
    pub fn ln2(&self) -> Hp {
        let three = self.from_int(3);
        let u = self.div(&self.one(), &three).unwrap();
        self.atanh_series(&u)
    }

    /// 2 * sum_{k>=0} u^(2k+1)/(2k+1), valid for |u| < 1.
    fn atanh_series(&self, u: &Hp) -> Hp {
        let u2 = self.mul(u, u);
        let mut pow = u.clone();
        let mut sum = u.clone();
        let mut k: u64 = 1;
        loop {
            pow = self.mul(&pow, &u2);
            let term = Hp {
                mant: pow.mant.div_floor(&BigInt::from(2 * k + 1)),
                scale: self.scale,
            };
            if term.mant.abs() <= BigInt::one() {
                break;
            }
            sum = sum.add(&term);
            k += 1;
            assert!(k < 16 * self.scale as u64 + 64, "atanh series stalled");
        }
        sum.mul_int(2)
    }

    /// Floor square root for nonnegative input.
    pub fn sqrt(&self, x: &Hp) -> Option<Hp> {
        assert_eq!(x.scale, self.scale);
        if x.is_negative() {
            return None;
        }
        Some(Hp {
            mant: (&x.mant * &self.unit).sqrt(),
            scale: self.scale,
        })
    }
}
