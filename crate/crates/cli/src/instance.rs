//! Builds validated presentations and family parameters from a config.

use cqm_core::{
    build_group, check_embedding, AmalgamFamily, AmalgamPresentation, GroupSpec, HnnFamily,
    HnnPresentation,
};
use thiserror::Error;

use crate::config::{Caps, InstanceConfig, Kind};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown instance {name:?}; built-ins are {builtins}")]
    UnknownInstance { name: String, builtins: String },
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config field {field} is required for kind {kind}")]
    MissingField { field: &'static str, kind: Kind },
    #[error("embedding map is missing source element {element}")]
    IncompleteMap { element: u32 },
    #[error("invalid group data: {0}")]
    Group(#[from] cqm_core::GroupError),
    #[error("invalid presentation: {0}")]
    Amalgam(#[from] cqm_core::AmalgamError),
    #[error("invalid presentation: {0}")]
    Hnn(#[from] cqm_core::HnnError),
    #[error("invalid family parameters: {0}")]
    Family(#[from] cqm_core::FamilyError),
}

pub struct AmalgamInstance {
    pub name: String,
    pub pres: AmalgamPresentation,
    pub a1: u32,
    pub a2: u32,
    pub b: u32,
    pub caps: Caps,
    pub expected_ab: Option<Vec<u64>>,
}

impl AmalgamInstance {
    pub fn family(&self) -> Result<AmalgamFamily<'_>, cqm_core::FamilyError> {
        AmalgamFamily::new(&self.pres, self.a1, self.a2, self.b, self.caps.max_index)
    }
}

pub struct HnnInstance {
    pub name: String,
    pub pres: HnnPresentation,
    pub g: u32,
    pub h: u32,
    pub caps: Caps,
    pub expected_ab: Option<Vec<u64>>,
}

impl HnnInstance {
    pub fn family(&self) -> Result<HnnFamily<'_>, cqm_core::FamilyError> {
        HnnFamily::new(&self.pres, self.g, self.h, self.caps.max_index)
    }
}

pub enum Instance {
    Amalgam(AmalgamInstance),
    Hnn(HnnInstance),
}

impl Instance {
    pub fn name(&self) -> &str {
        match self {
            Instance::Amalgam(a) => &a.name,
            Instance::Hnn(h) => &h.name,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Instance::Amalgam(_) => Kind::Amalgam,
            Instance::Hnn(_) => Kind::Hnn,
        }
    }

    pub fn caps(&self) -> &Caps {
        match self {
            Instance::Amalgam(a) => &a.caps,
            Instance::Hnn(h) => &h.caps,
        }
    }

    pub fn caps_mut(&mut self) -> &mut Caps {
        match self {
            Instance::Amalgam(a) => &mut a.caps,
            Instance::Hnn(h) => &mut h.caps,
        }
    }

    /// Builds and validates everything the config references; family
    /// parameters are checked eagerly so bad configs fail fast.
    pub fn build(cfg: &InstanceConfig) -> Result<Instance, ConfigError> {
        match cfg.kind {
            Kind::Amalgam => {
                let a = build_group(&GroupSpec::parse(&cfg.a)?)?;
                let b_spec = cfg.b.as_ref().ok_or(ConfigError::MissingField {
                    field: "b",
                    kind: cfg.kind,
                })?;
                let b = build_group(&GroupSpec::parse(b_spec)?)?;
                let c_spec = cfg.c.as_ref().ok_or(ConfigError::MissingField {
                    field: "c",
                    kind: cfg.kind,
                })?;
                let c = build_group(&GroupSpec::parse(c_spec)?)?;
                let map_a = total_map(cfg.iota_a.as_ref().ok_or(ConfigError::MissingField {
                    field: "iota_a",
                    kind: cfg.kind,
                })?, c.order())?;
                let map_b = total_map(cfg.iota_b.as_ref().ok_or(ConfigError::MissingField {
                    field: "iota_b",
                    kind: cfg.kind,
                })?, c.order())?;
                let iota_a = check_embedding(&c, &a, &map_a)?;
                let iota_b = check_embedding(&c, &b, &map_b)?;
                let pres = AmalgamPresentation::new(a, b, c, iota_a, iota_b)?;
                let (a1, a2, bv) = (
                    cfg.family.a1.ok_or(ConfigError::MissingField {
                        field: "family.a1",
                        kind: cfg.kind,
                    })?,
                    cfg.family.a2.ok_or(ConfigError::MissingField {
                        field: "family.a2",
                        kind: cfg.kind,
                    })?,
                    cfg.family.b.ok_or(ConfigError::MissingField {
                        field: "family.b",
                        kind: cfg.kind,
                    })?,
                );
                let inst = AmalgamInstance {
                    name: cfg.name.clone(),
                    pres,
                    a1,
                    a2,
                    b: bv,
                    caps: cfg.caps.clone(),
                    expected_ab: cfg.expected_abelianization.clone(),
                };
                inst.family()?;
                Ok(Instance::Amalgam(inst))
            }
            Kind::Hnn => {
                let a = build_group(&GroupSpec::parse(&cfg.a)?)?;
                let c_elements = cfg.c_elements.as_ref().ok_or(ConfigError::MissingField {
                    field: "c_elements",
                    kind: cfg.kind,
                })?;
                let phi = cfg.phi.as_ref().ok_or(ConfigError::MissingField {
                    field: "phi",
                    kind: cfg.kind,
                })?;
                let phi_pairs: Vec<(u32, u32)> = phi.iter().map(|(&k, &v)| (k, v)).collect();
                let pres = HnnPresentation::new(a, c_elements, &phi_pairs)?;
                let (g, h) = (
                    cfg.family.g.ok_or(ConfigError::MissingField {
                        field: "family.g",
                        kind: cfg.kind,
                    })?,
                    cfg.family.h.ok_or(ConfigError::MissingField {
                        field: "family.h",
                        kind: cfg.kind,
                    })?,
                );
                let inst = HnnInstance {
                    name: cfg.name.clone(),
                    pres,
                    g,
                    h,
                    caps: cfg.caps.clone(),
                    expected_ab: cfg.expected_abelianization.clone(),
                };
                inst.family()?;
                Ok(Instance::Hnn(inst))
            }
        }
    }
}

/// Completes a nonidentity-element map to a total source table.
fn total_map(
    map: &std::collections::BTreeMap<u32, u32>,
    source_order: usize,
) -> Result<Vec<u32>, ConfigError> {
    let mut out = vec![0u32; source_order];
    for (&k, &v) in map {
        if (k as usize) < source_order {
            out[k as usize] = v;
        }
    }
    for x in 1..source_order as u32 {
        if !map.contains_key(&x) {
            return Err(ConfigError::IncompleteMap { element: x });
        }
    }
    Ok(out)
}

/// Resolves `--instance NAME` or `--config FILE` into a built instance.
pub fn load_instance(
    name: Option<&str>,
    config_path: Option<&std::path::Path>,
) -> Result<Instance, ConfigError> {
    let cfg = match (name, config_path) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str::<InstanceConfig>(&text)?
        }
        (Some(n), None) => {
            crate::config::builtin(n).ok_or_else(|| ConfigError::UnknownInstance {
                name: n.to_string(),
                builtins: crate::config::builtin_names().join(", "),
            })?
        }
        (None, None) => {
            return Err(ConfigError::UnknownInstance {
                name: "(none given: pass --instance or --config)".to_string(),
                builtins: crate::config::builtin_names().join(", "),
            })
        }
    };
    Instance::build(&cfg)
}
