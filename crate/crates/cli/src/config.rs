//! Instance configuration: JSON schema, defaults, and the built-in
//! presentations.
//!
//! A config names the groups by the spec grammar (`cyclic:n`,
//! `product:[...]`, `table:[[...]]`), embeddings as index maps (total on the
//! nonidentity elements of the source; the identity is implicit), subgroups
//! as element lists, and the family parameters. Caps bound the exhaustive
//! and sampled checks so a full run stays at desk scale.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Amalgam,
    Hnn,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kind::Amalgam => write!(f, "amalgam"),
            Kind::Hnn => write!(f, "hnn"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    /// Highest family index `i` the instance will build.
    pub max_index: u32,
    /// Highest power `n` used in value checks `h_{w_i}(w_i^n)`.
    pub max_n: usize,
    /// Cap on enumerated gauge-orbit sizes.
    pub orbit_cap: u64,
    /// Radius of exhaustive word/ball enumerations.
    pub exhaustive_radius: usize,
    /// Radius of the exhaustive defect scan.
    pub defect_radius: usize,
    /// Sample count for the random defect scan.
    pub defect_samples: usize,
    /// Maximum word length for random defect samples.
    pub defect_max_len: usize,
    /// Sample count for the Lipschitz checks.
    pub lipschitz_samples: usize,
    pub lipschitz_max_len: usize,
    /// Sample count for the splitting checks.
    pub split_samples: usize,
    pub split_max_len: usize,
    /// Random reduced words for the Britton soundness check.
    pub britton_samples: usize,
    /// Ball radius for the oracle-equivalence suite.
    pub oracle_max_g: usize,
    /// Pattern lengths for the oracle-equivalence suite.
    pub oracle_pattern_lens: Vec<usize>,
    /// Node cap for oracle enumerations.
    pub oracle_node_cap: u64,
    /// Base RNG seed; each sampled suite derives its own stream from it.
    pub seed: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_index: 2,
            max_n: 3,
            orbit_cap: 1_000_000,
            exhaustive_radius: 4,
            defect_radius: 2,
            defect_samples: 10_000,
            defect_max_len: 50,
            lipschitz_samples: 1_000,
            lipschitz_max_len: 20,
            split_samples: 1_000,
            split_max_len: 24,
            britton_samples: 500,
            oracle_max_g: 3,
            oracle_pattern_lens: vec![2, 3, 4],
            oracle_node_cap: 50_000_000,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub name: String,
    pub kind: Kind,
    /// Group spec for `A`.
    pub a: String,
    /// Group spec for `B` (amalgam only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    /// Group spec for `C` (amalgam only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    /// Embedding `C -> A` as a map on nonidentity element indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iota_a: Option<BTreeMap<u32, u32>>,
    /// Embedding `C -> B`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iota_b: Option<BTreeMap<u32, u32>>,
    /// Elements of the subgroup `C <= A` (HNN only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_elements: Option<Vec<u32>>,
    /// `phi : C -> A` as a map on A-element indices (HNN only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<BTreeMap<u32, u32>>,
    pub family: FamilyConfig,
    #[serde(default)]
    pub caps: Caps,
    /// Expected nontrivial abelian invariant factors (0 = free factor).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_abelianization: Option<Vec<u64>>,
}

/// The built-in instances shipped with the harness.
pub fn builtin(name: &str) -> Option<InstanceConfig> {
    match name {
        "psl2z" => Some(InstanceConfig {
            name: "psl2z".to_string(),
            kind: Kind::Amalgam,
            a: "cyclic:3".to_string(),
            b: Some("cyclic:2".to_string()),
            c: Some("cyclic:1".to_string()),
            iota_a: Some(BTreeMap::new()),
            iota_b: Some(BTreeMap::new()),
            c_elements: None,
            phi: None,
            family: FamilyConfig {
                a1: Some(1),
                a2: Some(2),
                b: Some(1),
                ..FamilyConfig::default()
            },
            caps: Caps {
                exhaustive_radius: 5,
                defect_radius: 3,
                oracle_max_g: 4,
                ..Caps::default()
            },
            expected_abelianization: Some(vec![6]),
        }),
        "sl2z" => Some(InstanceConfig {
            name: "sl2z".to_string(),
            kind: Kind::Amalgam,
            a: "cyclic:6".to_string(),
            b: Some("cyclic:4".to_string()),
            c: Some("cyclic:2".to_string()),
            iota_a: Some(BTreeMap::from([(1, 3)])),
            iota_b: Some(BTreeMap::from([(1, 2)])),
            c_elements: None,
            phi: None,
            family: FamilyConfig {
                a1: Some(1),
                a2: Some(2),
                b: Some(1),
                ..FamilyConfig::default()
            },
            caps: Caps {
                exhaustive_radius: 4,
                oracle_max_g: 2,
                ..Caps::default()
            },
            expected_abelianization: Some(vec![12]),
        }),
        "klein-hnn" => Some(InstanceConfig {
            name: "klein-hnn".to_string(),
            kind: Kind::Hnn,
            a: "product:[cyclic:2,cyclic:2]".to_string(),
            b: None,
            c: None,
            iota_a: None,
            iota_b: None,
            c_elements: Some(vec![0, 1]),
            phi: Some(BTreeMap::from([(1, 2)])),
            family: FamilyConfig {
                g: Some(2),
                h: Some(1),
                ..FamilyConfig::default()
            },
            caps: Caps {
                exhaustive_radius: 4,
                oracle_max_g: 3,
                ..Caps::default()
            },
            expected_abelianization: Some(vec![2, 0]),
        }),
        _ => None,
    }
}

pub fn builtin_names() -> &'static [&'static str] {
    &["psl2z", "sl2z", "klein-hnn"]
}
