use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::groups::{same_group, Group};

/// Coefficient rings usable in a group ring.
pub trait Coefficient: Num + Clone + fmt::Display + fmt::Debug {
    fn to_json(&self) -> Value;
}

impl Coefficient for BigInt {
    fn to_json(&self) -> Value {
        match i64::try_from(self) {
            Ok(v) => Value::from(v),
            Err(_) => Value::from(self.to_string()),
        }
    }
}

impl Coefficient for BigRational {
    fn to_json(&self) -> Value {
        if self.is_integer() {
            self.to_integer().to_json()
        } else {
            Value::from(self.to_string())
        }
    }
}

/// A dense element `sum c_g g` of the group ring over `T`.
#[derive(Debug, Clone)]
pub struct GroupRingElement<T> {
    group: Group,
    coeffs: Vec<T>,
}

/// Integral group-ring elements; every `theta_f(S)` lives here.
pub type IntElement = GroupRingElement<BigInt>;
/// Rational group-ring elements, used only for the Stickelberger element.
pub type RatElement = GroupRingElement<BigRational>;

impl<T: Coefficient> PartialEq for GroupRingElement<T> {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.coeffs == other.coeffs
    }
}

impl<T: Coefficient> GroupRingElement<T> {
    pub fn zero(group: &Group) -> Self {
        GroupRingElement { group: group.clone(), coeffs: vec![T::zero(); group.order()] }
    }

    pub fn from_coeffs(group: &Group, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::domain(format!("{} coefficients for a group of order {}", coeffs.len(), group.order())));
        }
        Ok(GroupRingElement { group: group.clone(), coeffs })
    }

    /// The group element `g` itself.
    pub fn basis(group: &Group, g: usize) -> Self {
        let mut x = Self::zero(group);
        x.coeffs[g] = T::one();
        x
    }

    /// Sum of the listed elements, each with coefficient 1 (repeats add up).
    pub fn from_support(group: &Group, support: &[usize]) -> Self {
        let mut x = Self::zero(group);
        for &g in support {
            x.coeffs[g] = x.coeffs[g].clone() + T::one();
        }
        x
    }

    /// The G-trace `N = sum_{g in G} g`.
    pub fn g_trace(group: &Group) -> Self {
        GroupRingElement { group: group.clone(), coeffs: vec![T::one(); group.order()] }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn coeff(&self, g: usize) -> &T {
        &self.coeffs[g]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&g| !self.coeffs[g].is_zero()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_trace(&self) -> bool {
        self.coeffs.iter().all(One::is_one)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(GroupRingElement { group: self.group.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(GroupRingElement { group: self.group.clone(), coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let g = &self.group;
        let mut out = Self::zero(g);
        let right = other.support();
        for a in self.support() {
            for &b in &right {
                let ab = g.mul(a, b);
                out.coeffs[ab] = out.coeffs[ab].clone() + self.coeffs[a].clone() * other.coeffs[b].clone();
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &T) -> Self {
        GroupRingElement {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Canonical text form `c1*s_a + c2*s_b + ...`, ascending element order,
    /// zero terms omitted; `0` for the zero element.
    pub fn to_text(&self) -> String {
        let terms: Vec<String> =
            self.support().into_iter().map(|g| format!("{}*{}", self.coeffs[g], self.group.label(g))).collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// JSON array of `[label, coeff]` pairs over the support.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.support()
                .into_iter()
                .map(|g| Value::Array(vec![Value::from(self.group.label(g)), self.coeffs[g].to_json()]))
                .collect(),
        )
    }
}

impl<T: Coefficient> fmt::Display for GroupRingElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl IntElement {
    pub fn to_vec(&self) -> Vec<BigInt> {
        self.coeffs.clone()
    }

    pub fn is_zero_one(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero() || c.is_one())
    }

    /// Parses expressions such as `1*s1 + 1*s5`, `s1+s5` or `-2*s3 + s4`.
    /// Whitespace is ignored and coefficients default to 1.
    pub fn parse(group: &Group, text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        if compact == "0" {
            return Ok(Self::zero(group));
        }
        let mut out = Self::zero(group);
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ if first => (false, rest),
                _ => return Err(Error::Parse(format!("expected '+' or '-' before {rest:?}"))),
            };
            first = false;
            // signed coefficients as in `s1 + -4*s2`
            let signed = body.strip_prefix('-').filter(|b| {
                let d = b.find(|c: char| !c.is_ascii_digit()).unwrap_or(b.len());
                d > 0 && b[d..].starts_with('*')
            });
            let (negative, body) = match signed {
                Some(b) => (!negative, b),
                None => (negative, body),
            };
            // a label right after `*` may itself start with '-' (as in `1*-i`)
            let digits = body.find(|c: char| !c.is_ascii_digit()).unwrap_or(body.len());
            let (coeff, label_start) = if digits > 0 && body[digits..].starts_with('*') {
                let c = &body[..digits];
                (c.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?, digits + 1)
            } else {
                (BigInt::one(), 0)
            };
            let label_body = &body[label_start..];
            let end = label_body
                .char_indices()
                .skip(1)
                .find(|&(_, c)| c == '+' || c == '-')
                .map_or(label_body.len(), |(i, _)| i);
            let label = &label_body[..end];
            rest = &label_body[end..];
            let g = group.find_label(label).ok_or_else(|| Error::Parse(format!("unknown element {label:?}")))?;
            let coeff = if negative { -coeff } else { coeff };
            out.coeffs[g] = out.coeffs[g].clone() + coeff;
        }
        Ok(out)
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}
