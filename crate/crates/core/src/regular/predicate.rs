use std::collections::BTreeMap;
use std::fmt;

use crate::abcat::Invariants;
use crate::error::{Error, Result};
use crate::intlin::Ring;

/// Per-prime bounds on the exponent of p-primary torsion.
///
/// `default` applies to primes without an explicit bound; `None` means
/// unbounded. Every such profile is closed under subobjects, quotients and
/// finite sums, and admits a largest quotient in the class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentProfile {
    pub default: Option<u32>,
    pub bounds: BTreeMap<u64, u32>,
}

impl ExponentProfile {
    pub fn bound(&self, p: u64) -> Option<u32> {
        self.bounds.get(&p).copied().or(self.default)
    }

    /// Whether a cyclic summand with the given prime-power factorization is allowed.
    fn admits_factor(&self, factors: &[(u64, u32)]) -> bool {
        factors.iter().all(|&(p, e)| self.bound(p).is_none_or(|b| e <= b))
    }

    /// The largest divisor of `d` whose cyclic module is allowed.
    pub fn allowed_part<R: Ring>(&self, d: &R) -> R {
        match d.prime_power_factors() {
            None => d.clone(),
            Some(f) => f.iter().fold(R::one(), |acc, &(p, e)| {
                let keep = self.bound(p).map_or(e, |b| e.min(b));
                acc * R::from_i64((p as i64).pow(keep))
            }),
        }
    }
}

/// A membership class of modules defining the full subcategory `E`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Predicate {
    /// Closed under subobjects and quotients, given by exponent bounds.
    Profile { name: String, profile: ExponentProfile },
    /// Free modules together with `Z/4`. Not closed under subobjects; kept
    /// as a negative control.
    FreeOrCyclic4,
}

impl Predicate {
    pub fn all() -> Self {
        Predicate::Profile { name: "all".into(), profile: ExponentProfile { default: None, bounds: BTreeMap::new() } }
    }

    pub fn torsion_free() -> Self {
        Predicate::Profile {
            name: "torsion-free".into(),
            profile: ExponentProfile { default: Some(0), bounds: BTreeMap::new() },
        }
    }

    /// Modules whose torsion is killed by `m`.
    pub fn torsion_exponent(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parse("torsion exponent must be positive".into()));
        }
        let bounds = crate::intlin::Z::from(m)
            .prime_power_factors()
            .expect("integer factorization")
            .into_iter()
            .collect();
        Ok(Predicate::Profile {
            name: format!("torsion-exponent:{m}"),
            profile: ExponentProfile { default: Some(0), bounds },
        })
    }

    /// Modules without elements of any of the listed prime-power orders.
    pub fn forbid(orders: &[(u64, u32)]) -> Result<Self> {
        let mut bounds = BTreeMap::new();
        for &(p, k) in orders {
            if k == 0 || !is_prime(p) {
                return Err(Error::Parse(format!("forbidden order {p}^{k} is not a nontrivial prime power")));
            }
            let b = bounds.entry(p).or_insert(k - 1);
            *b = (*b).min(k - 1);
        }
        let name = format!(
            "forbid:{}",
            bounds.iter().map(|(p, b)| format!("{p}^{}", b + 1)).collect::<Vec<_>>().join(",")
        );
        Ok(Predicate::Profile { name, profile: ExponentProfile { default: None, bounds } })
    }

    pub fn name(&self) -> String {
        match self {
            Predicate::Profile { name, .. } => name.clone(),
            Predicate::FreeOrCyclic4 => "free-or-Z4".into(),
        }
    }

    pub fn profile(&self) -> Option<&ExponentProfile> {
        match self {
            Predicate::Profile { profile, .. } => Some(profile),
            Predicate::FreeOrCyclic4 => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "all" | "abelian" => return Ok(Self::all()),
            "torsion-free" | "lat" => return Ok(Self::torsion_free()),
            "free-or-Z4" | "free-or-Z/4" | "free-or-z4" => return Ok(Predicate::FreeOrCyclic4),
            _ => {}
        }
        if let Some(m) = s.strip_prefix("torsion-exponent:") {
            let m: u64 = m.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            return Self::torsion_exponent(m);
        }
        if let Some(list) = s.strip_prefix("forbid:") {
            let mut orders = Vec::new();
            for item in list.split(',') {
                orders.push(parse_prime_power(item.trim())?);
            }
            return Self::forbid(&orders);
        }
        Err(Error::Parse(format!("unknown predicate {s:?}")))
    }

    pub fn admits<R: Ring>(&self, inv: &Invariants<R>) -> bool {
        match self {
            Predicate::FreeOrCyclic4 => {
                inv.torsion.is_empty() || (inv.free_rank == 0 && inv.torsion == vec![R::from_i64(4)])
            }
            Predicate::Profile { profile, .. } => inv.torsion.iter().all(|d| match d.prime_power_factors() {
                Some(f) => profile.admits_factor(&f),
                None => true,
            }),
        }
    }

    /// Whether the class is closed under subobjects by construction.
    pub fn is_subobject_closed(&self) -> bool {
        matches!(self, Predicate::Profile { .. })
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn parse_prime_power(s: &str) -> Result<(u64, u32)> {
    let bad = || Error::Parse(format!("expected a prime power like 2^2, got {s:?}"));
    let (p, k) = match s.split_once('^') {
        Some((p, k)) => (p.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?),
        None => {
            let n: u64 = s.parse().map_err(|_| bad())?;
            let f = crate::intlin::Z::from(n).prime_power_factors().ok_or_else(bad)?;
            if f.len() != 1 {
                return Err(bad());
            }
            f[0]
        }
    };
    Ok((p, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::{int, Z};

    fn inv(free_rank: usize, torsion: &[i64]) -> Invariants<Z> {
        Invariants { free_rank, torsion: torsion.iter().map(|&d| int(d)).collect() }
    }

    #[test]
    fn shipped_predicates() {
        let e2 = Predicate::parse("torsion-exponent:2").unwrap();
        assert!(e2.admits(&inv(2, &[2, 2])));
        assert!(!e2.admits(&inv(0, &[4])));
        assert!(!e2.admits(&inv(0, &[6])));
        let lat = Predicate::parse("torsion-free").unwrap();
        assert!(lat.admits(&inv(3, &[])));
        assert!(!lat.admits(&inv(0, &[2])));
        assert!(Predicate::all().admits(&inv(1, &[12])));
        let z4 = Predicate::parse("free-or-Z4").unwrap();
        assert!(z4.admits(&inv(0, &[4])));
        assert!(!z4.admits(&inv(0, &[2])));
    }

    #[test]
    fn forbidden_orders() {
        let p = Predicate::parse("forbid:4,3^1").unwrap();
        assert_eq!(p.name(), "forbid:2^2,3^1");
        assert!(p.admits(&inv(1, &[2, 10])));
        assert!(!p.admits(&inv(0, &[12])));
        assert!(Predicate::parse("forbid:6").is_err());
        assert!(Predicate::parse("forbid:4^1").is_err());
    }

    #[test]
    fn allowed_parts() {
        let p = Predicate::torsion_exponent(6).unwrap();
        assert_eq!(p.profile().unwrap().allowed_part(&int::<Z>(72)), int(6));
        assert_eq!(Predicate::torsion_free().profile().unwrap().allowed_part(&int::<Z>(5)), int(1));
        assert_eq!(Predicate::all().profile().unwrap().allowed_part(&int::<Z>(12)), int(12));
    }
}
