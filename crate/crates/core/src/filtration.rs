//! The filtration `V_k` and the order statistic.
//!
//! A monomial `pq*` has parameters `n = l(p)+l(q)`, `s = sd(p)+sd(q)` and
//! `d = |l(p)−l(q)|`, and lies in `V_k` whenever `n ≥ k(s+d+1)`. Its order
//! `n/(s+d+1)` is therefore the largest `k` it certifies. Orders are exact
//! nonnegative rationals, with `+∞` for the zero element.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::algebra::{Element, Monomial};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::specialization::Specialization;

pub type Rational = Ratio<i64>;

/// A filtration level or a precision: a nonnegative rational or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(Rational),
    Infinite,
}

impl Order {
    pub const ZERO: Order = Order::Finite(Ratio::new_raw(0, 1));

    pub fn int(n: i64) -> Order {
        assert!(n >= 0, "orders are nonnegative");
        Order::Finite(Ratio::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Order {
        let r = Ratio::new(num, den);
        assert!(r >= Ratio::zero(), "orders are nonnegative");
        Order::Finite(r)
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }

    pub fn finite(self) -> Option<Rational> {
        match self {
            Order::Finite(r) => Some(r),
            Order::Infinite => None,
        }
    }

    /// `self − x`, clamped at zero. `∞ − x = ∞`.
    pub fn minus(self, x: Rational) -> Order {
        match self {
            Order::Finite(r) => Order::Finite((r - x).max(Ratio::zero())),
            Order::Infinite => Order::Infinite,
        }
    }

    /// `self + x`, clamped at zero.
    pub fn plus(self, x: Rational) -> Order {
        self.minus(-x)
    }

    /// `self · x` for `x > 0`.
    pub fn times(self, x: Rational) -> Order {
        assert!(x > Ratio::zero());
        match self {
            Order::Finite(r) => Order::Finite(r * x),
            Order::Infinite => Order::Infinite,
        }
    }

    /// The least integer not below `self`.
    pub fn ceil(self) -> Option<i64> {
        self.finite().map(|r| r.ceil().to_integer())
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Order::Finite(r) => r.to_f64().unwrap_or(f64::INFINITY),
            Order::Infinite => f64::INFINITY,
        }
    }
}

impl From<Rational> for Order {
    fn from(r: Rational) -> Self {
        Order::Finite(r.max(Ratio::zero()))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Order::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Order {
    type Err = Error;

    /// A nonnegative integer, a fraction `a/b`, or `inf`.
    fn from_str(s: &str) -> Result<Order> {
        let bad = || Error::InvalidPrecision(s.to_string());
        let s = s.trim();
        if s == "inf" {
            return Ok(Order::Infinite);
        }
        let digits = |t: &str| -> Result<i64> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        match s.split_once('/') {
            None => Ok(Order::Finite(Ratio::from_integer(digits(s)?))),
            Some((a, b)) => {
                let (a, b) = (digits(a)?, digits(b)?);
                if b == 0 {
                    return Err(bad());
                }
                Ok(Order::Finite(Ratio::new(a, b)))
            }
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The certificate parameters `(n, s, d)` of a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FiltrationParams {
    pub n: i64,
    pub s: i64,
    pub d: i64,
}

impl FiltrationParams {
    pub fn of(g: &Graph, gamma: &Specialization, m: &Monomial) -> Self {
        let (lp, lq) = (m.p().len() as i64, m.q().len() as i64);
        FiltrationParams {
            n: lp + lq,
            s: (gamma.sd(g, m.p()) + gamma.sd(g, m.q())) as i64,
            d: (lp - lq).abs(),
        }
    }

    /// `n / (s+d+1)`.
    pub fn ord(self) -> Rational {
        Ratio::new(self.n, self.s + self.d + 1)
    }
}

/// The order of a single monomial.
pub fn ord(g: &Graph, gamma: &Specialization, m: &Monomial) -> Rational {
    FiltrationParams::of(g, gamma, m).ord()
}

/// The least order over the support of `a`; `+∞` for zero.
pub fn min_ord(a: &Element) -> Order {
    let alg = a.algebra();
    a.monomials()
        .map(|m| ord(alg.graph(), alg.gamma(), m))
        .min()
        .map_or(Order::Infinite, Order::Finite)
}

/// The monomial of least order in `a` (the first one in canonical order on
/// ties), with its order.
pub fn lowest_term(a: &Element) -> Option<(&Monomial, Rational)> {
    let alg = a.algebra();
    a.monomials()
        .map(|m| (m, ord(alg.graph(), alg.gamma(), m)))
        .min_by_key(|(_, o)| *o)
}

/// A guaranteed order for `t·m` and `m·t` when `t` lies in `V_k` and `m` has
/// parameters `(n₀, s₀, d₀)`:
///
/// ```text
/// max(0, min((k−1)/2, (k+n₀−d₀) / (2(s₀+d₀+1))))
/// ```
///
/// Products of `V_{n,s,d}` with `V_{n₀,s₀,d₀}` land in
/// `V_{(n+n₀−d−d₀)/2, s+s₀, d+d₀}`; the formula is the least resulting order
/// over all `(n, s, d)` with `n ≥ k(s+d+1)`.
pub fn product_precision(k: Order, m: FiltrationParams) -> Order {
    let k = match k {
        Order::Infinite => return Order::Infinite,
        Order::Finite(k) => k,
    };
    let one = Ratio::from_integer(1);
    let two = Ratio::from_integer(2);
    let a = (k - one) / two;
    let b = (k + Ratio::from_integer(m.n - m.d)) / Ratio::from_integer(2 * (m.s + m.d + 1));
    Order::from(a.min(b))
}

/// `max(0, (k−1)/2)`: the guaranteed order of `V_k · V_k`.
pub fn square_precision(k: Order) -> Order {
    match k {
        Order::Infinite => Order::Infinite,
        Order::Finite(k) => Order::from((k - Ratio::from_integer(1)) / Ratio::from_integer(2)),
    }
}

/// The least `k` with `product_precision(k, m) − 1 ≥ t`, i.e. the input
/// precision needed for a truncated product to reach precision `t`.
///
/// Also covers `square_precision(k) − 1 ≥ t`.
pub fn required_precision(t: Order, m: FiltrationParams) -> Order {
    let t = match t {
        Order::Infinite => return Order::Infinite,
        Order::Finite(t) => t,
    };
    let t1 = t + Ratio::from_integer(1);
    let two = Ratio::from_integer(2);
    let a = two * t1 + Ratio::from_integer(1);
    let b = two * t1 * Ratio::from_integer(m.s + m.d + 1) - Ratio::from_integer(m.n - m.d);
    Order::from(a.max(b))
}
