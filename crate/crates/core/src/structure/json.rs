use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signature::{ConstOp, Kind, Signature, UnaryOp};
use crate::structure::{Atom, AtomStructure, CaAtomStructure, RaAtomStructure};

/// Serialized atom structure; see `docs/format.md`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StructureJson {
    Ra(RaJson),
    Ca(CaJson),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaJson {
    pub kind: String,
    pub atoms: Vec<String>,
    pub identity: Identity,
    pub converse: BTreeMap<String, String>,
    pub forbidden: Vec<[String; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Identity {
    One(String),
    Many(Vec<String>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaJson {
    pub kind: String,
    pub n: usize,
    pub atoms: Vec<String>,
    pub ops: BTreeMap<String, Vec<[String; 2]>>,
    #[serde(default)]
    pub diag: BTreeMap<String, Vec<String>>,
}

impl From<&AtomStructure> for StructureJson {
    fn from(s: &AtomStructure) -> Self {
        match s {
            AtomStructure::Ra(s) => StructureJson::Ra(RaJson {
                kind: "ra".into(),
                atoms: s.names().to_vec(),
                identity: match s.identities() {
                    [one] => Identity::One(s.name(*one).to_string()),
                    many => Identity::Many(many.iter().map(|&i| s.name(i).to_string()).collect()),
                },
                converse: s.atoms().map(|a| (s.name(a).to_string(), s.name(s.converse(a)).to_string())).collect(),
                forbidden: s
                    .forbidden()
                    .iter()
                    .map(|&(a, b, c)| [s.name(a).to_string(), s.name(b).to_string(), s.name(c).to_string()])
                    .collect(),
            }),
            AtomStructure::Ca(s) => {
                let n = s.dim();
                let ops = s
                    .relations()
                    .iter()
                    .map(|(op, r)| {
                        let pairs = s
                            .atoms()
                            .flat_map(|a| {
                                s.atoms()
                                    .filter(move |&b| r[a as usize] >> b & 1 == 1)
                                    .map(move |b| [s.name(a).to_string(), s.name(b).to_string()])
                            })
                            .collect();
                        (op.name(n), pairs)
                    })
                    .collect();
                let diag = s
                    .diagonals()
                    .iter()
                    .map(|(&(i, j), &m)| {
                        let members = s.atoms().filter(|&a| m >> a & 1 == 1).map(|a| s.name(a).to_string()).collect();
                        (ConstOp::Diag(i, j).name(), members)
                    })
                    .collect();
                StructureJson::Ca(CaJson {
                    kind: s.signature().kind.name().to_lowercase(),
                    n,
                    atoms: s.names().to_vec(),
                    ops,
                    diag,
                })
            }
        }
    }
}

impl AtomStructure {
    pub fn to_json(&self) -> StructureJson {
        StructureJson::from(self)
    }

    pub fn from_json(j: &StructureJson) -> Result<AtomStructure> {
        match j {
            StructureJson::Ra(r) => {
                if r.kind != "ra" {
                    return Err(Error::invalid(format!("RA structure with kind {:?}", r.kind)));
                }
                let lookup = |name: &str| -> Result<Atom> {
                    r.atoms
                        .iter()
                        .position(|a| a == name)
                        .map(|p| p as Atom)
                        .ok_or_else(|| Error::invalid(format!("unknown atom {name:?}")))
                };
                let identities = match &r.identity {
                    Identity::One(s) => vec![lookup(s)?],
                    Identity::Many(v) => v.iter().map(|s| lookup(s)).collect::<Result<_>>()?,
                };
                let mut converse = Vec::with_capacity(r.atoms.len());
                for a in &r.atoms {
                    let c = r.converse.get(a).ok_or_else(|| Error::invalid(format!("no converse for {a:?}")))?;
                    converse.push(lookup(c)?);
                }
                if r.converse.len() != r.atoms.len() {
                    return Err(Error::invalid("converse mentions unknown atoms"));
                }
                let forbidden = r
                    .forbidden
                    .iter()
                    .map(|[a, b, c]| Ok((lookup(a)?, lookup(b)?, lookup(c)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(RaAtomStructure::new(r.atoms.clone(), identities, converse, forbidden)?.into())
            }
            StructureJson::Ca(c) => {
                let kind: Kind = c.kind.parse()?;
                if kind == Kind::Ra {
                    return Err(Error::invalid("kind \"ra\" needs the RA layout"));
                }
                let sig = Signature::new(kind, c.n)?;
                let lookup = |name: &str| -> Result<Atom> {
                    c.atoms
                        .iter()
                        .position(|a| a == name)
                        .map(|p| p as Atom)
                        .ok_or_else(|| Error::invalid(format!("unknown atom {name:?}")))
                };
                let mut relations = BTreeMap::new();
                for (name, pairs) in &c.ops {
                    let op = UnaryOp::parse(name, c.n)?;
                    let mut r = vec![0u64; c.atoms.len()];
                    for [a, b] in pairs {
                        r[lookup(a)? as usize] |= 1 << lookup(b)?;
                    }
                    relations.insert(op, r);
                }
                let mut diagonals = BTreeMap::new();
                for (name, members) in &c.diag {
                    let ConstOp::Diag(i, j) = ConstOp::parse(name)? else {
                        return Err(Error::invalid(format!("{name:?} is not a diagonal")));
                    };
                    let mut m = 0u64;
                    for a in members {
                        m |= 1 << lookup(a)?;
                    }
                    diagonals.insert((i, j), m);
                }
                Ok(CaAtomStructure::new(sig, c.atoms.clone(), relations, diagonals)?.into())
            }
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("structure serializes")
    }

    pub fn from_json_str(text: &str) -> Result<AtomStructure> {
        let j: StructureJson = serde_json::from_str(text)?;
        AtomStructure::from_json(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::gen_rainbow;

    #[test]
    fn rainbow_json_round_trip() {
        let s: AtomStructure = gen_rainbow(2, 1).unwrap().into();
        let back = AtomStructure::from_json_str(&s.to_json_string()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn ca_json_round_trip() {
        let text = r#"{"kind":"ca","n":1,"atoms":["p","q"],
            "ops":{"c0":[["p","p"],["p","q"],["q","p"],["q","q"]]},"diag":{}}"#;
        let s = AtomStructure::from_json_str(text).unwrap();
        assert!(s.validate().is_empty());
        assert_eq!(AtomStructure::from_json_str(&s.to_json_string()).unwrap(), s);
    }

    #[test]
    fn unknown_atom_is_rejected() {
        let text = r#"{"kind":"ra","atoms":["Id"],"identity":"Id","converse":{"Id":"Id"},"forbidden":[["Id","Id","x"]]}"#;
        assert!(AtomStructure::from_json_str(text).is_err());
    }
}
