//! Exact evaluation of the effective constants: `b(m, n, M)`, the per-place
//! constant `a`, `b1`, `b2`, `b3`, the degree `m`, `c_eps` and `c'_eps`, and
//! the reduction of a divisor family to a common degree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_field::RationalFunction;
use crate::hilbert_bounds::{s_sum, threshold_a_eps, HilbertTable};
use crate::multipoly::HomogeneousPoly;
use crate::serialize::{bigint, rational, rational_vec};

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `(4m)^{n+1} + (5(n+1)Delta)^{(n+1)M(M-1)/2 + M 2^M}`, for
/// `m >= max{3, (n+1)Delta}`.
pub fn b_const(m: u64, n: u64, ambient: u64, delta: u64) -> Result<BigInt> {
    let floor = 3.max((n + 1) * delta);
    if m < floor {
        return Err(Error::PreconditionViolated(format!("b(m, n, M) needs m >= {floor}, got {m}")));
    }
    let first = BigInt::from(4 * m).pow((n + 1) as u32);
    let exp = (n + 1) * ambient * ambient.saturating_sub(1) / 2 + ambient * (1u64 << ambient);
    let second = BigInt::from(5 * (n + 1) * delta).pow(exp as u32);
    Ok(first + second)
}

/// `(6 max{(N+1)Delta, d})^{(n+1)(M^2+M)}`.
pub fn place_constant_power(n: u64, ambient: u64, big_n: u64, delta: u64, d: u64) -> BigInt {
    let base = 6 * ((big_n + 1) * delta).max(d);
    BigInt::from(base).pow(((n + 1) * (ambient * ambient + ambient)) as u32)
}

/// The power above times `h(F_X) + h(Q_1, ..., Q_q)`.
pub fn lemma37_const(
    n: u64,
    ambient: u64,
    big_n: u64,
    delta: u64,
    d: u64,
    h_fx: &BigRational,
    h_q_family: &BigRational,
) -> BigRational {
    rat(place_constant_power(n, ambient, big_n, delta, d)) * (h_fx + h_q_family)
}

/// `d (floor(a/d) + 1)`, raised to the least multiple of `d` that is at
/// least `max{3, (n+1)Delta}`.
pub fn choose_m(a_eps: u64, d: u64, n: u64, delta: u64) -> u64 {
    let m = d * (a_eps / d + 1);
    let floor = 3.max((n + 1) * delta);
    if m >= floor {
        m
    } else {
        floor.div_ceil(d) * d
    }
}

/// Inputs to [`assemble_constants`]. Heights are exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantInputs {
    pub n: u64,
    pub delta: u64,
    pub ambient_dim: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub q: u64,
    /// `d_i`.
    pub degrees: Vec<u64>,
    #[serde(with = "rational")]
    pub epsilon: BigRational,
    pub s_card: u64,
    pub s_degree: u64,
    #[serde(with = "rational")]
    pub h_fx: BigRational,
    /// `h(Q_1, ..., Q_q)` of the normalized equal-degree family.
    #[serde(with = "rational")]
    pub h_q_family: BigRational,
    /// `h(Q_i)` of the original divisors.
    #[serde(with = "rational_vec")]
    pub h_q: Vec<BigRational>,
    /// `sum_{p in S} e_p(Q_1, ..., Q_q) deg p` of the normalized family.
    #[serde(with = "rational")]
    pub e_s_term: BigRational,
    #[serde(with = "rational")]
    pub c1: BigRational,
    #[serde(with = "rational")]
    pub c1_prime: BigRational,
    #[serde(default)]
    pub m: Option<u64>,
}

impl ConstantInputs {
    /// `lcm(d_i)`.
    pub fn d(&self) -> u64 {
        self.degrees.iter().fold(1u64, |acc, &x| acc.lcm(&x))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::PreconditionViolated(m.to_string()));
        if self.n < 1 || self.big_n < self.n {
            return bad("need N >= n >= 1");
        }
        if self.q < self.n + 1 {
            return bad("need q >= n + 1");
        }
        if self.degrees.len() as u64 != self.q || self.h_q.len() as u64 != self.q {
            return bad("need one degree and one height per divisor");
        }
        if self.degrees.contains(&0) || self.delta == 0 {
            return bad("degrees must be positive");
        }
        if self.epsilon <= BigRational::zero() {
            return bad("epsilon must be positive");
        }
        Ok(())
    }

    /// The threshold is taken at `eps / N`, so that
    /// `N m (H(m)+1) / S(m/d-1) <= d (N(n+1) + eps)`.
    pub fn a_eps(&self) -> u64 {
        let eps = &self.epsilon / rat(self.big_n);
        threshold_a_eps(self.n, self.delta, self.d(), &eps)
    }

    /// Override or `choose_m(a_eps)`.
    pub fn degree_m(&self) -> u64 {
        self.m
            .unwrap_or_else(|| choose_m(self.a_eps(), self.d(), self.n, self.delta))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffectiveConstants {
    pub a_eps: u64,
    pub m: u64,
    pub d: u64,
    /// Degree at which `b` is evaluated: `max{m, 3, (n+1)Delta}`.
    pub b_degree: u64,
    #[serde(with = "bigint")]
    pub b: BigInt,
    #[serde(with = "bigint")]
    pub place_constant_power: BigInt,
    #[serde(with = "rational")]
    pub lemma37_a: BigRational,
    #[serde(with = "bigint")]
    pub h_m: BigInt,
    /// `S(m/d - 1) = sum_{i=1}^{m/d-1} H(id)`.
    #[serde(with = "bigint")]
    pub s_sum: BigInt,
    #[serde(with = "rational")]
    pub b1: BigRational,
    #[serde(with = "rational")]
    pub b2: BigRational,
    #[serde(with = "rational")]
    pub b3: BigRational,
    #[serde(with = "rational")]
    pub c_eps: BigRational,
    #[serde(with = "rational")]
    pub c_prime_eps: BigRational,
}

/// Evaluates every constant exactly. `h` must hold `H(m)` and `H(id)` for
/// `1 <= i < m/d`.
pub fn assemble_constants(inputs: &ConstantInputs, h: &HilbertTable) -> Result<EffectiveConstants> {
    inputs.validate()?;
    let (n, delta, ambient, big_n, q) = (inputs.n, inputs.delta, inputs.ambient_dim, inputs.big_n, inputs.q);
    let d = inputs.d();
    let a_eps = inputs.a_eps();
    let m = inputs.degree_m();
    if m % d != 0 || m < 2 * d {
        return Err(Error::PreconditionViolated(format!("m = {m} must be a multiple of d = {d} with m >= 2d")));
    }
    let b_degree = m.max(3).max((n + 1) * delta);
    let b = b_const(b_degree, n, ambient, delta)?;
    let br = rat(b.clone());
    let power = place_constant_power(n, ambient, big_n, delta, d);
    let heights = &inputs.h_fx + &inputs.h_q_family;
    let lemma37_a = rat(power.clone()) * &heights;
    let h_m = h.get(&m).cloned().ok_or(Error::MissingTableEntry(m))?;
    let s = s_sum(h, m, d)?;
    if s.is_zero() {
        return Err(Error::PreconditionViolated("S(m/d - 1) is zero".into()));
    }

    let s_card = rat(inputs.s_card);
    let b1 = rat(m + 1) * rat(h_m.clone()) * &br * &heights;
    let b2 = &s_card * &b1;
    let b3 = &lemma37_a * rat(q - big_n) * &s_card - rat(q) * &inputs.e_s_term;
    let c_eps = (&inputs.c1 + rat(ambient + 2) * &br * &inputs.h_fx) / rat(m);

    let dr = rat(d);
    let weighted: BigRational = inputs
        .h_q
        .iter()
        .zip(&inputs.degrees)
        .map(|(hq, &di)| hq / rat(di))
        .fold(BigRational::zero(), |a, x| a + x);
    let scaled: BigRational = inputs
        .h_q
        .iter()
        .zip(&inputs.degrees)
        .map(|(hq, &di)| hq * rat(d / di))
        .fold(BigRational::zero(), |a, x| a + x);
    let term1 = rat(power.clone()) * (&inputs.h_fx / &dr + &weighted) * rat(q - big_n) * &s_card;
    let term2 = rat(q) * &weighted;
    let inner = &s_card * rat(m + 1) * rat(h_m.clone()) * &br * (&inputs.h_fx + &scaled) + &inputs.c1_prime;
    let term3 = rat(big_n) * inner / (&dr * rat(s.clone()));
    let c_prime_eps = term1 + term2 + term3;

    Ok(EffectiveConstants {
        a_eps,
        m,
        d,
        b_degree,
        b,
        place_constant_power: power,
        lemma37_a,
        h_m,
        s_sum: s,
        b1,
        b2,
        b3,
        c_eps,
        c_prime_eps,
    })
}

/// `(Q_i / a_i)^{d/d_i}` with `a_i` the coefficient of the graded-lex
/// largest monomial of `Q_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcmReduction {
    pub d: u32,
    pub normalized: Vec<HomogeneousPoly>,
    pub units: Vec<RationalFunction>,
    pub exponents: Vec<u32>,
}

pub fn lcm_reduction(qs: &[HomogeneousPoly]) -> Result<LcmReduction> {
    if qs.is_empty() || qs.iter().any(|q| q.is_zero() || q.degree() == 0) {
        return Err(Error::ZeroPolynomial);
    }
    let d = qs.iter().fold(1u32, |acc, q| acc.lcm(&q.degree()));
    let mut normalized = Vec::with_capacity(qs.len());
    let mut units = Vec::with_capacity(qs.len());
    let mut exponents = Vec::with_capacity(qs.len());
    for q in qs {
        let (_, a) = q.leading_term().expect("nonzero");
        let a = a.clone();
        let e = d / q.degree();
        let inv = a.inv().expect("nonzero coefficient");
        normalized.push(q.scale(&inv).pow(e));
        units.push(a);
        exponents.push(e);
    }
    Ok(LcmReduction {
        d,
        normalized,
        units,
        exponents,
    })
}

impl LcmReduction {
    /// `e_p` of the normalized family is at most 0 at every place since each
    /// member has a unit coefficient.
    pub fn has_unit_coefficients(&self) -> bool {
        self.normalized
            .iter()
            .all(|q| q.coefficients().any(|c| c.is_one()))
    }
}

impl Default for ConstantInputs {
    fn default() -> Self {
        ConstantInputs {
            n: 1,
            delta: 1,
            ambient_dim: 1,
            big_n: 1,
            q: 2,
            degrees: vec![1, 1],
            epsilon: BigRational::one(),
            s_card: 1,
            s_degree: 1,
            h_fx: BigRational::zero(),
            h_q_family: BigRational::zero(),
            h_q: vec![BigRational::zero(); 2],
            e_s_term: BigRational::zero(),
            c1: BigRational::zero(),
            c1_prime: BigRational::zero(),
            m: None,
        }
    }
}
