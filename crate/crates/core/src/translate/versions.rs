//! Version functions and the renamings derived from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::lang::{Identifier, Renaming, SaVar, Version, VersionContractError};

/// A total map from identifiers to versions; identifiers without an entry
/// are at `[0]`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct VersionMap {
    entries: BTreeMap<Identifier, Version>,
}

impl VersionMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every identifier of `universe` explicitly at `[0]`.
    pub fn initial<'a>(universe: impl IntoIterator<Item = &'a Identifier>) -> Self {
        VersionMap {
            entries: universe
                .into_iter()
                .map(|x| (x.clone(), Version::initial()))
                .collect(),
        }
    }

    pub fn get(&self, x: &Identifier) -> Version {
        self.entries
            .get(x)
            .cloned()
            .unwrap_or_else(Version::initial)
    }

    pub fn set(&mut self, x: Identifier, v: Version) {
        self.entries.insert(x, v);
    }

    /// Adds `[0]` entries for identifiers not yet present.
    pub fn extend_universe<'a>(&mut self, universe: impl IntoIterator<Item = &'a Identifier>) {
        for x in universe {
            self.entries
                .entry(x.clone())
                .or_insert_with(Version::initial);
        }
    }

    /// `x ↦ x_{V(x)}`.
    pub fn sa_var(&self, x: &Identifier) -> SaVar {
        SaVar::new(x.clone(), self.get(x))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Identifier, &Version)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Identifier> {
        self.entries.keys()
    }

    fn joint_keys<'a>(&'a self, other: &'a VersionMap) -> BTreeSet<&'a Identifier> {
        self.entries.keys().chain(other.entries.keys()).collect()
    }

    /// Parses `x=2,y=1.0`.
    pub fn parse_literal(text: &str) -> Result<Self, crate::lang::NameError> {
        let mut m = VersionMap::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, version) = part
                .split_once('=')
                .ok_or_else(|| crate::lang::NameError::BadSaVariable(part.to_string()))?;
            m.set(Identifier::parse(name.trim())?, version.trim().parse()?);
        }
        Ok(m)
    }
}

impl fmt::Debug for VersionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

/// Pointwise: `v(x)` when `w(x) ≺ v(x)`, otherwise `w(x)`.
pub fn sup(v: &VersionMap, w: &VersionMap) -> VersionMap {
    let mut out = VersionMap::new();
    for x in v.joint_keys(w) {
        let (vx, wx) = (v.get(x), w.get(x));
        out.set(x.clone(), if wx.precedes(&vx) { vx } else { wx });
    }
    out
}

/// Copies `x_{w(x)} := x_{v(x)}` for every `x` with `v(x) ≺ w(x)`.
pub fn merge(v: &VersionMap, w: &VersionMap) -> Renaming {
    let pairs = v.joint_keys(w).into_iter().filter_map(|x| {
        let (vx, wx) = (v.get(x), w.get(x));
        vx.precedes(&wx)
            .then(|| (SaVar::new(x.clone(), wx), SaVar::new(x.clone(), vx)))
    });
    Renaming::new(pairs).expect("merge pairs differ per identifier and by head")
}

/// Copies `x_{jump(l)} := x_l` for every `x_l` in `xs`.
pub fn upd(xs: &BTreeSet<SaVar>) -> Result<Renaming, VersionContractError> {
    let pairs = xs
        .iter()
        .map(|x| Ok((SaVar::new(x.base.clone(), x.version.jump()?), x.clone())))
        .collect::<Result<Vec<_>, VersionContractError>>()?;
    Ok(Renaming::new(pairs).expect("jumped versions are shorter than their sources"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(n: &str) -> Identifier {
        Identifier::new(n)
    }

    fn ver(ix: &[u32]) -> Version {
        Version::new(ix.to_vec()).unwrap()
    }

    fn map(entries: &[(&str, &[u32])]) -> VersionMap {
        let mut m = VersionMap::new();
        for (x, v) in entries {
            m.set(id(x), ver(v));
        }
        m
    }

    fn sv(s: &str) -> SaVar {
        SaVar::parse(s).unwrap()
    }

    #[test]
    fn sup_examples() {
        let v = map(&[("x", &[2, 0])]);
        let w = map(&[("x", &[1, 0])]);
        assert_eq!(sup(&v, &w), v);
        assert_eq!(sup(&v, &v), v);
        let one = map(&[("x", &[1])]);
        assert_eq!(sup(&one, &one), one);
        // unmapped identifiers read [0]
        assert_eq!(
            sup(&map(&[]), &map(&[("y", &[3])])).get(&id("y")),
            ver(&[3])
        );
    }

    #[test]
    fn merge_examples() {
        // hand-applied: only x satisfies v(x) ≺ w(x)
        let v = map(&[("x", &[1]), ("y", &[2])]);
        let w = map(&[("x", &[2]), ("y", &[2])]);
        assert_eq!(
            merge(&v, &w),
            Renaming::new([(sv("x_2"), sv("x_1"))]).unwrap()
        );
        assert!(merge(&v, &v).is_empty());

        let else_map = map(&[("x", &[0])]);
        let then_map = map(&[("x", &[1])]);
        assert_eq!(
            merge(&else_map, &then_map),
            Renaming::new([(sv("x_1"), sv("x_0"))]).unwrap()
        );
    }

    #[test]
    fn upd_examples() {
        let one = upd(&BTreeSet::from([sv("x_1.0")])).unwrap();
        assert_eq!(one, Renaming::new([(sv("x_1"), sv("x_1.0"))]).unwrap());
        assert!(upd(&BTreeSet::new()).unwrap().is_empty());

        let outer = BTreeSet::from([sv("j_1.0"), sv("r_1.0"), sv("f_1.1"), sv("i_1.1")]);
        let expected = Renaming::new([
            (sv("j_1"), sv("j_1.0")),
            (sv("r_1"), sv("r_1.0")),
            (sv("f_2"), sv("f_1.1")),
            (sv("i_2"), sv("i_1.1")),
        ])
        .unwrap();
        assert_eq!(upd(&outer).unwrap(), expected);

        assert!(upd(&BTreeSet::from([sv("x_3")])).is_err());
    }

    #[test]
    fn literal_parsing() {
        let m = VersionMap::parse_literal("x=2, y=1.0").unwrap();
        assert_eq!(m.get(&id("y")), ver(&[1, 0]));
        assert_eq!(m.get(&id("z")), ver(&[0]));
        assert!(VersionMap::parse_literal("x=").is_err());
    }
}
