//! Report schema shared by every subcommand: versioned, deterministic JSON
//! keyed by (command, params, seed, prime). Timings are printed to stderr
//! only, so the serialized artifact is byte-for-byte reproducible.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

/// Registered analysis anchors: every report must point at one, which keeps
/// orphan subcommands out of the artifact set.
pub const ANCHORS: &[(&str, &str)] = &[
    (
        "lattice.certify",
        "bounded-enumeration certificates for the Picard-lattice lemma catalog",
    ),
    (
        "moduli.identities",
        "divisor-class recursions against closed forms, and the three-divisor identity",
    ),
    (
        "moduli.picid",
        "syzygy = secant + i * hurwitz divisor identity",
    ),
    (
        "moduli.osztaly",
        "syzygy divisor class against its closed form",
    ),
    (
        "moduli.dims",
        "rank balance and the printed-vs-derived dimension bookkeeping",
    ),
    (
        "koszul.betti",
        "graded Betti table of an embedded curve model",
    ),
    (
        "koszul.prym-green",
        "predicted Prym-canonical resolution tables",
    ),
    (
        "koszul.secant-divisorial",
        "divisorial secant equivalence sampling at genus three",
    ),
    (
        "curve.torsion-scan",
        "two-torsion cohomology scan over a split hyperelliptic curve",
    ),
    ("report.render", "human-readable rendering of a stored report"),
];

pub fn anchor_registered(anchor: &str) -> bool {
    ANCHORS.iter().any(|&(a, _)| a == anchor)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub anchor: String,
    /// Canonicalized parameters, always including `seed` and `prime`.
    pub params: BTreeMap<String, serde_json::Value>,
    pub verdicts: Vec<Check>,
    pub payload: serde_json::Value,
}

impl Report {
    pub fn new(
        command: &str,
        anchor: &str,
        params: BTreeMap<String, serde_json::Value>,
        verdicts: Vec<Check>,
        payload: serde_json::Value,
    ) -> Self {
        assert!(
            anchor_registered(anchor),
            "anchor {anchor} is not registered"
        );
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            anchor: anchor.to_string(),
            params,
            verdicts,
            payload,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|c| c.pass)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("report serialization");
        bytes.push(b'\n');
        bytes
    }
}

/// Helper for building the params map.
pub fn params_from(pairs: &[(&str, serde_json::Value)]) -> BTreeMap<String, serde_json::Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}
