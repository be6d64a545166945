//! Optimality of a vertex as cone membership of the weight vector.
//!
//! Three regimes pick the generator lattice: the unit cube for nonnegative
//! weights, the cube shifted by the weight vector's negative support, or the
//! full {-1,0,1} lattice for arbitrary weights. Every verdict carries a
//! re-verified certificate and its agreement with brute-force argmax.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cone::{cone_member, Membership};
use crate::error::{CopxError, Result};
use crate::instances::{argmax_brute, Instance, WeightVector};
use crate::lattice::{normal_generators, GeneratorSet, Lattice, LatticeCaps};
use crate::rational::RatVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Nonneg,
    SignedSupport,
    General,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Nonneg, Regime::SignedSupport, Regime::General];

    pub fn name(self) -> &'static str {
        match self {
            Regime::Nonneg => "nonneg",
            Regime::SignedSupport => "signed_support",
            Regime::General => "general",
        }
    }

    /// Whether `c` may be certified in this regime.
    pub fn admits(self, c: &WeightVector) -> bool {
        self != Regime::Nonneg || c.is_nonneg()
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = CopxError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonneg" => Ok(Regime::Nonneg),
            "signed_support" | "signed-support" | "signed" => Ok(Regime::SignedSupport),
            "general" => Ok(Regime::General),
            other => Err(CopxError::InvalidParams(format!("unknown regime {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalityVerdict {
    pub vertex: usize,
    pub regime: Regime,
    /// Negative support `C` of the weight vector (signed-support regime only).
    pub support: Vec<usize>,
    pub is_optimal: bool,
    pub witness: Membership,
    /// Number of generators the membership test ran against.
    pub generators: usize,
    /// `is_optimal` agrees with brute-force argmax.
    pub cross_check: bool,
}

impl OptimalityVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "k": self.vertex,
            "regime": self.regime.name(),
            "optimal": self.is_optimal,
            "certificate": self.witness,
            "cross_check": self.cross_check,
        });
        if self.regime == Regime::SignedSupport {
            v["C"] = json!(self.support);
        }
        v
    }
}

/// A disagreement between the cone verdict and brute force.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub instance: String,
    pub regime: Regime,
    pub c: RatVec,
    pub k: usize,
    pub cone_verdict: bool,
    pub brute_verdict: bool,
    pub argmax: Vec<usize>,
    pub certificate: Membership,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalSet {
    pub regime: Regime,
    pub optimal: Vec<usize>,
    pub argmax: Vec<usize>,
    pub verdicts: Vec<OptimalityVerdict>,
    pub counterexamples: Vec<Counterexample>,
}

impl OptimalSet {
    pub fn agrees(&self) -> bool {
        self.counterexamples.is_empty() && self.optimal == self.argmax
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "regime": self.regime.name(),
            "optimal": self.optimal,
            "argmax": self.argmax,
            "verdicts": self.verdicts.iter().map(OptimalityVerdict::to_json).collect::<Vec<_>>(),
            "counterexamples": self.counterexamples,
        })
    }
}

/// Decides optimality for one instance, caching generator sets per
/// (lattice, vertex) so repeated weight vectors reuse them.
pub struct OptimalityEngine<'a> {
    inst: &'a Instance,
    caps: LatticeCaps,
    cache: Mutex<HashMap<(Lattice, usize), Arc<GeneratorSet>>>,
}

impl<'a> OptimalityEngine<'a> {
    pub fn new(inst: &'a Instance, caps: LatticeCaps) -> Self {
        OptimalityEngine { inst, caps, cache: Mutex::new(HashMap::new()) }
    }

    pub fn instance(&self) -> &Instance {
        self.inst
    }

    pub fn lattice_for(&self, c: &WeightVector, regime: Regime) -> Result<Lattice> {
        let n = self.inst.n();
        match regime {
            Regime::Nonneg => {
                if !c.is_nonneg() {
                    return Err(CopxError::RegimeMismatch {
                        regime: "nonneg",
                        reason: format!("components {:?} are negative", c.negative_support()),
                    });
                }
                Ok(Lattice::cube(n))
            }
            Regime::SignedSupport => Lattice::shifted(n, &c.negative_support()),
            Regime::General => Ok(Lattice::full(n)),
        }
    }

    pub fn generators(&self, lattice: &Lattice, k: usize) -> Result<Arc<GeneratorSet>> {
        let key = (lattice.clone(), k);
        if let Some(g) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(g.clone());
        }
        let g = Arc::new(normal_generators(self.inst, lattice, k, &self.caps)?);
        Ok(self.cache.lock().expect("cache lock").entry(key).or_insert(g).clone())
    }

    fn check_weights(&self, c: &WeightVector) -> Result<()> {
        if c.len() != self.inst.n() {
            return Err(CopxError::DimensionMismatch { expected: self.inst.n(), found: c.len() });
        }
        Ok(())
    }

    fn verdict(
        &self,
        c: &WeightVector,
        k: usize,
        regime: Regime,
        lattice: &Lattice,
        argmax: &[usize],
    ) -> Result<OptimalityVerdict> {
        let gens = self.generators(lattice, k)?;
        let witness = cone_member(&gens.members, c.entries())?;
        if !witness.verify(&gens.members, c.entries()) {
            return Err(CopxError::CertificateInvalid(format!(
                "vertex {k}, regime {regime}: {}",
                serde_json::to_string(&witness)?
            )));
        }
        let is_optimal = witness.is_member();
        Ok(OptimalityVerdict {
            vertex: k,
            regime,
            support: lattice.support().to_vec(),
            is_optimal,
            witness,
            generators: gens.len(),
            cross_check: is_optimal == argmax.binary_search(&k).is_ok(),
        })
    }

    pub fn decide(&self, c: &WeightVector, k: usize, regime: Regime) -> Result<OptimalityVerdict> {
        self.check_weights(c)?;
        self.inst.check_index(k)?;
        let lattice = self.lattice_for(c, regime)?;
        let argmax = argmax_brute(self.inst, c)?;
        self.verdict(c, k, regime, &lattice, &argmax)
    }

    /// Verdicts for every vertex; disagreements with brute force are
    /// collected as counterexamples rather than raised.
    pub fn optimal_set(&self, c: &WeightVector, regime: Regime) -> Result<OptimalSet> {
        self.check_weights(c)?;
        let lattice = self.lattice_for(c, regime)?;
        let argmax = argmax_brute(self.inst, c)?;
        let verdicts: Vec<OptimalityVerdict> = (0..self.inst.len())
            .into_par_iter()
            .map(|k| self.verdict(c, k, regime, &lattice, &argmax))
            .collect::<Result<_>>()?;
        let optimal = verdicts.iter().filter(|v| v.is_optimal).map(|v| v.vertex).collect();
        let counterexamples = verdicts
            .iter()
            .filter(|v| !v.cross_check)
            .map(|v| Counterexample {
                instance: self.inst.family().to_string(),
                regime,
                c: c.entries().clone(),
                k: v.vertex,
                cone_verdict: v.is_optimal,
                brute_verdict: !v.is_optimal,
                argmax: argmax.clone(),
                certificate: v.witness.clone(),
            })
            .collect();
        Ok(OptimalSet { regime, optimal, argmax, verdicts, counterexamples })
    }
}

pub fn decide_optimal(
    inst: &Instance,
    c: &WeightVector,
    k: usize,
    regime: Regime,
    caps: &LatticeCaps,
) -> Result<OptimalityVerdict> {
    OptimalityEngine::new(inst, *caps).decide(c, k, regime)
}

/// Optimal vertices under the general regime.
pub fn optimal_set(inst: &Instance, c: &WeightVector, caps: &LatticeCaps) -> Result<OptimalSet> {
    OptimalityEngine::new(inst, *caps).optimal_set(c, Regime::General)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_family, triangle_trees, Family, GenLimits, Graph};
    use crate::rational::Rat;
    use proptest::prelude::*;

    fn caps() -> LatticeCaps {
        LatticeCaps::default()
    }

    fn w(v: &[i64]) -> WeightVector {
        WeightVector::from_ints(v.iter().copied())
    }

    fn k_of(inst: &Instance, v: &[u8]) -> usize {
        inst.index_of(v).unwrap()
    }

    #[test]
    fn triangle_verdicts() {
        let inst = triangle_trees();
        let k = k_of(&inst, &[0, 1, 1]);

        let v = decide_optimal(&inst, &w(&[0, 1, 1]), k, Regime::Nonneg, &caps()).unwrap();
        assert!(v.is_optimal && v.cross_check);
        assert!(matches!(v.witness, Membership::Cone(_)));

        let v = decide_optimal(&inst, &w(&[1, 0, 0]), k, Regime::Nonneg, &caps()).unwrap();
        assert!(!v.is_optimal && v.cross_check);
        assert!(matches!(v.witness, Membership::Farkas(_)));

        for k in 0..3 {
            let v = decide_optimal(&inst, &w(&[0, 0, 0]), k, Regime::General, &caps()).unwrap();
            assert!(v.is_optimal && v.cross_check);
            assert_eq!(v.witness, Membership::Cone(Default::default()));
        }

        let v = decide_optimal(&inst, &w(&[-1, 1, 1]), k, Regime::SignedSupport, &caps()).unwrap();
        assert!(v.is_optimal && v.cross_check);
        assert_eq!(v.support, vec![0]);
        assert_eq!(v.to_json()["C"], json!([0]));
    }

    #[test]
    fn nonneg_rejects_negative_weights() {
        let inst = triangle_trees();
        let err = decide_optimal(&inst, &w(&[-1, 1, 1]), 0, Regime::Nonneg, &caps()).unwrap_err();
        assert!(matches!(err, CopxError::RegimeMismatch { regime: "nonneg", .. }));
        assert!(decide_optimal(&inst, &w(&[1, 1]), 0, Regime::General, &caps()).is_err());
        assert!(decide_optimal(&inst, &w(&[1, 1, 1]), 7, Regime::General, &caps()).is_err());
    }

    #[test]
    fn triangle_optimal_sets() {
        let inst = triangle_trees();
        let all = optimal_set(&inst, &w(&[1, 1, 1]), &caps()).unwrap();
        assert_eq!(all.optimal, vec![0, 1, 2]);
        assert!(all.agrees());
        let one = optimal_set(&inst, &w(&[0, 1, 1]), &caps()).unwrap();
        assert_eq!(one.optimal, vec![k_of(&inst, &[0, 1, 1])]);
        assert!(one.agrees());
        let j = one.to_json();
        assert_eq!(j["verdicts"].as_array().unwrap().len(), 3);
        assert_eq!(j["verdicts"][0]["regime"], "general");
    }

    #[test]
    fn strictly_dominant_vertex() {
        let inst = gen_family(&Family::SpanningTrees(Graph::complete(4)), &GenLimits::default()).unwrap();
        let engine = OptimalityEngine::new(&inst, caps());
        for k in [0, 5, 15] {
            let c = WeightVector::from_ints(inst.vertex(k).iter().map(|&x| 2 * x as i64 - 1));
            assert_eq!(argmax_brute(&inst, &c).unwrap(), vec![k]);
            for regime in [Regime::SignedSupport, Regime::General] {
                let set = engine.optimal_set(&c, regime).unwrap();
                assert_eq!(set.optimal, vec![k]);
                assert!(set.agrees());
            }
        }
    }

    #[test]
    fn regime_parse_round_trip() {
        for r in Regime::ALL {
            assert_eq!(r.name().parse::<Regime>().unwrap(), r);
        }
        assert!("both".parse::<Regime>().is_err());
    }

    fn rat() -> impl Strategy<Value = Rat> {
        (-20i64..=20, 1i64..=6).prop_map(|(p, q)| Rat::new(p, q).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn positive_scaling_keeps_verdicts(c in prop::collection::vec(rat(), 3), alpha in 1i64..50, den in 1i64..7) {
            let inst = triangle_trees();
            let engine = OptimalityEngine::new(&inst, caps());
            let c = WeightVector::new(RatVec::new(c));
            let scaled = c.scale(&Rat::new(alpha, den).unwrap());
            for k in 0..inst.len() {
                let a = engine.decide(&c, k, Regime::General).unwrap();
                let b = engine.decide(&scaled, k, Regime::General).unwrap();
                prop_assert_eq!(a.is_optimal, b.is_optimal);
                prop_assert!(a.cross_check && b.cross_check);
            }
        }

        #[test]
        fn regimes_agree(c in prop::collection::vec(rat(), 3)) {
            let inst = triangle_trees();
            let engine = OptimalityEngine::new(&inst, caps());
            let c = WeightVector::new(RatVec::new(c));
            let general = engine.optimal_set(&c, Regime::General).unwrap();
            let signed = engine.optimal_set(&c, Regime::SignedSupport).unwrap();
            prop_assert_eq!(&general.optimal, &signed.optimal);
            prop_assert!(general.agrees() && signed.agrees());
            if c.is_nonneg() {
                let nonneg = engine.optimal_set(&c, Regime::Nonneg).unwrap();
                prop_assert_eq!(&general.optimal, &nonneg.optimal);
            }
        }
    }
}
