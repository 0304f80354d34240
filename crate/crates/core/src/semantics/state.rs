use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::lang::{NameError, Variable};

static ZERO: BigInt = BigInt::ZERO;

/// A total assignment of integers to variables; unbound variables read 0.
///
/// Zero bindings are never stored, so equality is extensional.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct State<V: Ord> {
    bindings: BTreeMap<V, BigInt>,
}

impl<V: Ord> Default for State<V> {
    fn default() -> Self {
        State {
            bindings: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateLiteralError {
    #[error("binding `{0}` is not of the form name=value")]
    Malformed(String),
    #[error(transparent)]
    Name(#[from] NameError),
    #[error("`{0}` is not an integer")]
    BadValue(String),
    #[error("variable `{0}` bound twice")]
    Duplicate(String),
}

impl<V: Variable> State<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, x: &V) -> &BigInt {
        self.bindings.get(x).unwrap_or(&ZERO)
    }

    pub fn set(&mut self, x: V, value: BigInt) {
        if value.is_zero() {
            self.bindings.remove(&x);
        } else {
            self.bindings.insert(x, value);
        }
    }

    /// `s[x ↦ value]` as a new state.
    pub fn with(&self, x: V, value: BigInt) -> Self {
        let mut s = self.clone();
        s.set(x, value);
        s
    }

    /// Nonzero bindings in variable order.
    pub fn iter(&self) -> impl Iterator<Item = (&V, &BigInt)> {
        self.bindings.iter()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (V, BigInt)>) -> Self {
        let mut s = Self::new();
        for (x, v) in pairs {
            s.set(x, v);
        }
        s
    }

    /// Parses `x=3,y=-1` (or `x_1.0=3` for versioned variables).
    pub fn parse_literal(text: &str) -> Result<Self, StateLiteralError> {
        let mut s = Self::new();
        let mut seen = std::collections::BTreeSet::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| StateLiteralError::Malformed(part.to_string()))?;
            let x = V::parse_token(name.trim())?;
            let value: BigInt = value
                .trim()
                .parse()
                .map_err(|_| StateLiteralError::BadValue(value.trim().to_string()))?;
            if !seen.insert(x.clone()) {
                return Err(StateLiteralError::Duplicate(name.trim().to_string()));
            }
            s.set(x, value);
        }
        Ok(s)
    }

    /// The inverse of [`State::parse_literal`]: `x=3,y=-1`.
    pub fn to_literal(&self) -> String {
        self.bindings
            .iter()
            .map(|(x, v)| format!("{x}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// `x=v` pairs for the given variables, space separated.
    pub fn render<'a>(&self, vars: impl IntoIterator<Item = &'a V>) -> String {
        vars.into_iter()
            .map(|x| format!("{x}={}", self.get(x)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl<V: Ord + fmt::Display> fmt::Debug for State<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}={v}")?;
        }
        f.write_str("}")
    }
}

impl<V: Ord + fmt::Display> fmt::Display for State<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
