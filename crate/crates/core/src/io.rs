//! JSON state-set files.
//!
//! ```json
//! {
//!   "format": "entbound-stateset/1",
//!   "dims": [2, 2],
//!   "states": [
//!     {"label": "a", "kind": "pure", "data": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]},
//!     {"label": "b", "kind": "mixed", "data": [[[0.5, 0], [0, 0], ...], ...]},
//!     {"label": "c", "kind": "family", "data": {"name": "ghz_set", "params": {"m": 2}}}
//!   ]
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs. Mixed data is a list of rows; a flat
//! row-major list of `D²` entries is accepted as well. Norms and traces must be
//! within `1e-6` of one and are renormalised on load. Every error names the
//! offending field, e.g. `states[2].data[5]`.

use serde_json::{json, Map, Value};

use crate::discrimination::{self, StateSet};
use crate::families;
use crate::linalg::{c, CMatrix, CVector, C64};
use crate::space::MultipartiteSpace;
use crate::state::{DensityOperator, PureState, QuantumState};
use crate::{Error, Result};

pub const FORMAT_VERSION: &str = "entbound-stateset/1";

/// Accepted deviation of norms and traces from one.
pub const LOAD_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Ghz {
        m: usize,
    },
    W {
        m: usize,
    },
    /// Index into `Φ⁺, Φ⁻, Ψ⁺, Ψ⁻`.
    Bell {
        index: usize,
    },
    MaxEntangled {
        d: usize,
    },
    /// Expands to `2^{m-1}` states.
    GhzSet {
        m: usize,
    },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Ghz { .. } => "ghz",
            FamilySpec::W { .. } => "w",
            FamilySpec::Bell { .. } => "bell",
            FamilySpec::MaxEntangled { .. } => "max_entangled",
            FamilySpec::GhzSet { .. } => "ghz_set",
        }
    }

    fn params(&self) -> Value {
        match *self {
            FamilySpec::Ghz { m } | FamilySpec::W { m } | FamilySpec::GhzSet { m } => {
                json!({ "m": m })
            }
            FamilySpec::Bell { index } => json!({ "index": index }),
            FamilySpec::MaxEntangled { d } => json!({ "d": d }),
        }
    }

    /// Labelled states of the family.
    pub fn expand(&self) -> Result<Vec<(String, PureState)>> {
        Ok(match *self {
            FamilySpec::Ghz { m } => vec![(format!("ghz{m}"), families::ghz(m)?)],
            FamilySpec::W { m } => vec![(format!("w{m}"), families::w(m)?)],
            FamilySpec::Bell { index } => {
                let label = families::BELL_LABELS.get(index).ok_or_else(|| {
                    Error::InvalidParameter(format!("bell index must be 0..4, got {index}"))
                })?;
                vec![(label.to_string(), families::bell_basis()[index].clone())]
            }
            FamilySpec::MaxEntangled { d } => {
                vec![(format!("max_entangled{d}"), families::max_entangled(d)?)]
            }
            FamilySpec::GhzSet { m } => {
                let set = discrimination::build_ghz_set(m)?;
                set.labels()
                    .iter()
                    .zip(set.states())
                    .map(|(l, s)| match s {
                        QuantumState::Pure(p) => (l.clone(), p.clone()),
                        QuantumState::Mixed(_) => unreachable!("GHZ set members are pure"),
                    })
                    .collect()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EntryData {
    Pure(CVector),
    Mixed(CMatrix),
    Family(FamilySpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub label: Option<String>,
    pub data: EntryData,
}

/// Parsed but not yet validated against quantum-state invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSetFile {
    pub dims: Vec<usize>,
    pub entries: Vec<Entry>,
}

fn format_err(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Format {
        field: field.into(),
        message: message.into(),
    }
}

fn parse_usize(v: &Value, field: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| format_err(field, "expected a nonnegative integer"))
}

fn parse_complex(v: &Value, field: &str) -> Result<C64> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| format_err(field, "expected an [re, im] pair"))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| format_err(format!("{field}[0]"), "expected a number"))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| format_err(format!("{field}[1]"), "expected a number"))?;
    Ok(c(re, im))
}

fn parse_complex_list(v: &Value, field: &str) -> Result<Vec<C64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| format_err(field, "expected a list of [re, im] pairs"))?;
    arr.iter()
        .enumerate()
        .map(|(i, z)| parse_complex(z, &format!("{field}[{i}]")))
        .collect()
}

fn parse_matrix(v: &Value, d: usize, field: &str) -> Result<CMatrix> {
    let arr = v
        .as_array()
        .ok_or_else(|| format_err(field, "expected a matrix"))?;
    let nested = arr
        .first()
        .and_then(Value::as_array)
        .and_then(|row| row.first())
        .is_some_and(Value::is_array);
    let entries = if nested {
        if arr.len() != d {
            return Err(format_err(
                field,
                format!("expected {d} rows, got {}", arr.len()),
            ));
        }
        let mut out = Vec::with_capacity(d * d);
        for (i, row) in arr.iter().enumerate() {
            let row_field = format!("{field}[{i}]");
            let row = parse_complex_list(row, &row_field)?;
            if row.len() != d {
                return Err(format_err(
                    row_field,
                    format!("expected {d} entries, got {}", row.len()),
                ));
            }
            out.extend(row);
        }
        out
    } else {
        let flat = parse_complex_list(v, field)?;
        if flat.len() != d * d {
            return Err(format_err(
                field,
                format!("expected {} entries, got {}", d * d, flat.len()),
            ));
        }
        flat
    };
    Ok(CMatrix::from_row_slice(d, d, &entries))
}

fn parse_family(v: &Value, field: &str) -> Result<FamilySpec> {
    let obj = v
        .as_object()
        .ok_or_else(|| format_err(field, "expected {\"name\", \"params\"}"))?;
    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .ok_or_else(|| format_err(format!("{field}.name"), "expected a family name"))?;
    let empty = Map::new();
    let params = match obj.get("params") {
        None => &empty,
        Some(p) => p
            .as_object()
            .ok_or_else(|| format_err(format!("{field}.params"), "expected an object"))?,
    };
    let param = |key: &str| -> Result<usize> {
        let f = format!("{field}.params.{key}");
        parse_usize(
            params
                .get(key)
                .ok_or_else(|| format_err(&f, "missing parameter"))?,
            &f,
        )
    };
    Ok(match name {
        "ghz" => FamilySpec::Ghz { m: param("m")? },
        "w" => FamilySpec::W { m: param("m")? },
        "bell" => FamilySpec::Bell {
            index: param("index")?,
        },
        "max_entangled" => FamilySpec::MaxEntangled { d: param("d")? },
        "ghz_set" => FamilySpec::GhzSet { m: param("m")? },
        other => {
            return Err(format_err(
                format!("{field}.name"),
                format!("unknown family `{other}`"),
            ))
        }
    })
}

impl StateSetFile {
    /// Parses the document structure; amplitude counts are checked against
    /// `dims` but quantum-state invariants are left to [`Self::to_state_set`].
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| format_err("document", e.to_string()))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| format_err("document", "expected a JSON object"))?;

        match obj.get("format").and_then(Value::as_str) {
            Some(FORMAT_VERSION) => {}
            Some(other) => {
                return Err(format_err(
                    "format",
                    format!("unsupported version `{other}`, expected `{FORMAT_VERSION}`"),
                ))
            }
            None => return Err(format_err("format", "missing format version")),
        }

        let dims_v = obj
            .get("dims")
            .and_then(Value::as_array)
            .ok_or_else(|| format_err("dims", "expected a list of local dimensions"))?;
        let dims = dims_v
            .iter()
            .enumerate()
            .map(|(i, d)| parse_usize(d, &format!("dims[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let space = MultipartiteSpace::new(&dims).map_err(|e| format_err("dims", e.to_string()))?;
        let d = space.total_dim();

        let states = obj
            .get("states")
            .and_then(Value::as_array)
            .ok_or_else(|| format_err("states", "expected a list of states"))?;
        let mut entries = Vec::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            let field = format!("states[{i}]");
            let so = s
                .as_object()
                .ok_or_else(|| format_err(&field, "expected an object"))?;
            let label = match so.get("label") {
                None | Some(Value::Null) => None,
                Some(Value::String(l)) => Some(l.clone()),
                Some(_) => return Err(format_err(format!("{field}.label"), "expected a string")),
            };
            let kind = so.get("kind").and_then(Value::as_str).ok_or_else(|| {
                format_err(format!("{field}.kind"), "expected pure, mixed or family")
            })?;
            let data_field = format!("{field}.data");
            let data = so
                .get("data")
                .ok_or_else(|| format_err(&data_field, "missing data"))?;
            let data = match kind {
                "pure" => {
                    let amps = parse_complex_list(data, &data_field)?;
                    if amps.len() != d {
                        return Err(format_err(
                            data_field,
                            format!("expected {d} amplitudes, got {}", amps.len()),
                        ));
                    }
                    EntryData::Pure(CVector::from_vec(amps))
                }
                "mixed" => EntryData::Mixed(parse_matrix(data, d, &data_field)?),
                "family" => EntryData::Family(parse_family(data, &data_field)?),
                other => {
                    return Err(format_err(
                        format!("{field}.kind"),
                        format!("unknown kind `{other}`"),
                    ))
                }
            };
            entries.push(Entry { label, data });
        }
        Ok(Self { dims, entries })
    }

    /// Validates and renormalises every entry, expanding families.
    pub fn to_state_set(&self) -> Result<StateSet> {
        let space =
            MultipartiteSpace::new(&self.dims).map_err(|e| format_err("dims", e.to_string()))?;
        let mut states = Vec::new();
        let mut labels = Vec::new();
        for (i, entry) in self.entries.iter().enumerate() {
            let field = format!("states[{i}].data");
            let invalid = |e: Error| format_err(&field, e.to_string());
            match &entry.data {
                EntryData::Pure(amps) => {
                    let norm = amps.norm();
                    if !norm.is_finite() || (norm - 1.0).abs() > LOAD_TOL {
                        return Err(format_err(
                            &field,
                            format!("norm {norm} is not 1 within {LOAD_TOL}"),
                        ));
                    }
                    let p = PureState::normalized(space.clone(), amps.clone()).map_err(invalid)?;
                    states.push(QuantumState::Pure(p));
                    labels.push(entry.label.clone().unwrap_or_else(|| format!("s{i}")));
                }
                EntryData::Mixed(m) => {
                    let tr = m.trace();
                    if !tr.re.is_finite()
                        || (tr.re - 1.0).abs() > LOAD_TOL
                        || tr.im.abs() > LOAD_TOL
                    {
                        return Err(format_err(
                            &field,
                            format!("trace {tr} is not 1 within {LOAD_TOL}"),
                        ));
                    }
                    let rho =
                        DensityOperator::new(space.clone(), m / c(tr.re, 0.0)).map_err(invalid)?;
                    states.push(QuantumState::Mixed(rho));
                    labels.push(entry.label.clone().unwrap_or_else(|| format!("s{i}")));
                }
                EntryData::Family(spec) => {
                    let members = spec.expand().map_err(invalid)?;
                    let single = members.len() == 1;
                    for (sub, p) in members {
                        if p.space() != &space {
                            return Err(format_err(
                                &field,
                                format!(
                                    "family {} has dims {:?}, file declares {:?}",
                                    spec.name(),
                                    p.space().dims(),
                                    self.dims
                                ),
                            ));
                        }
                        let label = match (&entry.label, single) {
                            (Some(l), true) => l.clone(),
                            (Some(l), false) => format!("{l}:{sub}"),
                            (None, _) => sub,
                        };
                        states.push(QuantumState::Pure(p));
                        labels.push(label);
                    }
                }
            }
        }
        StateSet::new(space, states, Some(labels))
    }

    /// Concrete entries for every member of `set`.
    pub fn from_state_set(set: &StateSet) -> Self {
        let entries = set
            .states()
            .iter()
            .zip(set.labels())
            .map(|(s, l)| Entry {
                label: Some(l.clone()),
                data: match s {
                    QuantumState::Pure(p) => EntryData::Pure(p.amplitudes().clone()),
                    QuantumState::Mixed(rho) => EntryData::Mixed(rho.matrix().clone()),
                },
            })
            .collect();
        Self {
            dims: set.space().dims().to_vec(),
            entries,
        }
    }

    pub fn to_json(&self) -> String {
        let pair = |z: &C64| json!([z.re, z.im]);
        let states: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let (kind, data) = match &e.data {
                    EntryData::Pure(v) => ("pure", Value::Array(v.iter().map(pair).collect())),
                    EntryData::Mixed(m) => (
                        "mixed",
                        Value::Array(
                            m.row_iter()
                                .map(|row| Value::Array(row.iter().map(pair).collect()))
                                .collect(),
                        ),
                    ),
                    EntryData::Family(f) => {
                        ("family", json!({ "name": f.name(), "params": f.params() }))
                    }
                };
                let mut o = Map::new();
                if let Some(l) = &e.label {
                    o.insert("label".into(), json!(l));
                }
                o.insert("kind".into(), json!(kind));
                o.insert("data".into(), data);
                Value::Object(o)
            })
            .collect();
        let doc = json!({
            "format": FORMAT_VERSION,
            "dims": self.dims,
            "states": states,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialise");
        s.push('\n');
        s
    }
}

/// Parses and validates in one step.
pub fn read_state_set(text: &str) -> Result<StateSet> {
    StateSetFile::parse(text)?.to_state_set()
}

pub fn write_state_set(set: &StateSet) -> String {
    StateSetFile::from_state_set(set).to_json()
}
