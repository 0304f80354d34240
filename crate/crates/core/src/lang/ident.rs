//! Identifiers, version lists and single-assignment variables.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Words reserved by the concrete syntax; never valid as identifiers.
pub const KEYWORDS: &[&str] = &[
    "skip",
    "if",
    "then",
    "else",
    "while",
    "invariant",
    "do",
    "for",
    "requires",
    "ensures",
    "define",
    "forall",
    "exists",
    "true",
    "false",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("`{0}` is a reserved word")]
    Reserved(String),
    #[error("a version needs at least one index")]
    EmptyVersion,
    #[error("`{0}` is not a single-assignment variable (expected name_N.N...)")]
    BadSaVariable(String),
}

/// A program variable or function name.
///
/// Letters, digits and underscores, starting with a letter. Ordered
/// lexicographically by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identifier(Arc<str>);

impl Identifier {
    pub fn parse(name: &str) -> Result<Self, NameError> {
        let mut chars = name.chars();
        let first_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
        if !first_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(NameError::BadIdentifier(name.to_string()));
        }
        if KEYWORDS.contains(&name) {
            return Err(NameError::Reserved(name.to_string()));
        }
        Ok(Identifier(Arc::from(name)))
    }

    /// Panics if `name` is not a valid identifier.
    pub fn new(name: &str) -> Self {
        Self::parse(name).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for Identifier {
    type Err = NameError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A nonempty list of counters; the head is the most recent one.
///
/// Printed head first with `.` separators, so `[1, 2, 0]` is `1.2.0`.
/// Ordering is lexicographic on the index list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Version(Vec<u32>);

impl Version {
    pub fn new(indices: Vec<u32>) -> Result<Self, NameError> {
        if indices.is_empty() {
            Err(NameError::EmptyVersion)
        } else {
            Ok(Version(indices))
        }
    }

    /// The version `[0]` every variable starts from by default.
    pub fn initial() -> Self {
        Version(vec![0])
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn head(&self) -> u32 {
        self.0[0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Increments the head: `(h:t) -> (h+1):t`.
    pub fn next(&self) -> Version {
        let mut v = self.0.clone();
        v[0] += 1;
        Version(v)
    }

    /// Opens a loop level by prepending `1`: `l -> 1:l`.
    pub fn nest(&self) -> Version {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(1);
        v.extend_from_slice(&self.0);
        Version(v)
    }

    /// Closes a loop level: `(i:j:t) -> (j+1):t`.
    ///
    /// Only defined for versions with at least two indices.
    pub fn jump(&self) -> Result<Version, VersionContractError> {
        if self.0.len() < 2 {
            return Err(VersionContractError::JumpOnFlat(self.clone()));
        }
        let mut v = self.0[1..].to_vec();
        v[0] += 1;
        Ok(Version(v))
    }

    /// `(h:t) ≺ (h':t')` iff `h < h'`; tails are ignored.
    pub fn precedes(&self, other: &Version) -> bool {
        self.head() < other.head()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VersionContractError {
    #[error("jump applied to single-index version {0}")]
    JumpOnFlat(Version),
}

impl FromStr for Version {
    type Err = NameError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let indices = s
            .split('.')
            .map(|p| {
                if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                p.parse::<u32>().ok()
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| NameError::BadSaVariable(s.to_string()))?;
        Version::new(indices)
    }
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// A versioned variable `x_l`, printed as `x_1.2.0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SaVar {
    pub base: Identifier,
    pub version: Version,
}

impl SaVar {
    pub fn new(base: Identifier, version: Version) -> Self {
        SaVar { base, version }
    }

    /// Splits `name_1.2.0` at the last underscore.
    pub fn parse(text: &str) -> Result<Self, NameError> {
        let bad = || NameError::BadSaVariable(text.to_string());
        let (base, version) = text.rsplit_once('_').ok_or_else(bad)?;
        let version: Version = version.parse().map_err(|_| bad())?;
        let base = Identifier::parse(base)?;
        Ok(SaVar { base, version })
    }
}

impl FromStr for SaVar {
    type Err = NameError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for SaVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.base, self.version)
    }
}

impl fmt::Debug for SaVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// What the AST, evaluator and VC generator need from a variable.
pub trait Variable: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// How parse errors name a token of this family.
    const KIND: &'static str;

    fn base(&self) -> &Identifier;

    /// A variable distinct from `self` and from everything in `avoid`.
    fn fresh_variant(&self, avoid: &BTreeSet<Self>) -> Self;

    /// Reads a variable token of this family from source text.
    fn parse_token(text: &str) -> Result<Self, NameError>;

    /// An SMT-LIB symbol; injective within the family.
    fn smt_symbol(&self) -> String;
}

impl Variable for Identifier {
    const KIND: &'static str = "identifier";

    fn base(&self) -> &Identifier {
        self
    }

    fn fresh_variant(&self, avoid: &BTreeSet<Self>) -> Self {
        (1u64..)
            .map(|k| Identifier::new(&format!("{}{}", self.0, k)))
            .find(|c| c != self && !avoid.contains(c))
            .expect("unbounded search")
    }

    fn parse_token(text: &str) -> Result<Self, NameError> {
        Identifier::parse(text)
    }

    fn smt_symbol(&self) -> String {
        self.0.to_string()
    }
}

impl Variable for SaVar {
    const KIND: &'static str = "versioned variable";

    fn base(&self) -> &Identifier {
        &self.base
    }

    fn fresh_variant(&self, avoid: &BTreeSet<Self>) -> Self {
        (0u32..)
            .map(|k| SaVar::new(self.base.clone(), Version(vec![k])))
            .find(|c| c != self && !avoid.contains(c))
            .expect("unbounded search")
    }

    fn parse_token(text: &str) -> Result<Self, NameError> {
        SaVar::parse(text)
    }

    /// `x_1.2.0` becomes `x_1_2_0`. Underscores inside the base are doubled
    /// so that `(x_1, 2.0)` and `(x, 1.2.0)` stay apart.
    fn smt_symbol(&self) -> String {
        let mut out = self.base.as_str().replace('_', "__");
        for n in self.version.indices() {
            out.push('_');
            out.push_str(&n.to_string());
        }
        out
    }
}
