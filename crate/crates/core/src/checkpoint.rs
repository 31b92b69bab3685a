//! Versioned JSON checkpoints.
//!
//! A checkpoint holds an optional sweep plan with its completed rows and any
//! number of resumable run states. Run states store the random generator as
//! 64 hex digits and hole/visit lists as lexicographically sorted
//! coordinate arrays.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::dynamics::WormState;
use crate::error::{Error, Result};
use crate::lattice::Site;
use crate::montecarlo::{ExperimentPlan, SampleRow};
use crate::rng::Xoshiro256pp;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunState {
    pub dim: usize,
    pub position: Site,
    pub step_count: u64,
    pub rng_state: String,
    pub created_total: u64,
    pub tan_total: Option<u64>,
    pub holes: Vec<Site>,
    pub visits: Option<Vec<Site>>,
}

impl RunState {
    pub fn capture(state: &WormState) -> Self {
        RunState {
            dim: state.dim(),
            position: state.position().clone(),
            step_count: state.step_count(),
            rng_state: state.rng().to_hex(),
            created_total: state.created_total(),
            tan_total: state.tan_total(),
            holes: state.holes_snapshot(),
            visits: state.visits().map(|v| v.sorted()),
        }
    }

    pub fn restore(&self) -> Result<WormState> {
        let rng = Xoshiro256pp::from_hex(&self.rng_state)?;
        if self.position.dim() != self.dim {
            return Err(Error::Checkpoint {
                field: "position".into(),
                reason: format!("expected {} coordinates", self.dim),
            });
        }
        WormState::from_parts(
            self.dim,
            self.position.clone(),
            self.step_count,
            self.holes.clone(),
            self.visits.clone(),
            rng,
            self.created_total,
            self.tan_total,
        )
    }

    fn from_value(value: &Value) -> Result<Self> {
        let obj = object(value, "runs[]")?;
        Ok(RunState {
            dim: field(obj, "dim")?,
            position: field(obj, "position")?,
            step_count: field(obj, "step_count")?,
            rng_state: field(obj, "rng_state")?,
            created_total: field(obj, "created_total")?,
            tan_total: field(obj, "tan_total")?,
            holes: field(obj, "holes")?,
            visits: field(obj, "visits")?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Checkpoint {
    pub format_version: u64,
    pub plan: Option<ExperimentPlan>,
    pub completed: Vec<SampleRow>,
    pub runs: Vec<RunState>,
}

impl Checkpoint {
    pub fn for_run(state: &WormState) -> Self {
        Checkpoint {
            format_version: FORMAT_VERSION,
            plan: None,
            completed: Vec::new(),
            runs: vec![RunState::capture(state)],
        }
    }

    pub fn for_sweep(plan: ExperimentPlan, mut completed: Vec<SampleRow>) -> Self {
        completed.sort_by_key(|r| (r.n, r.replica));
        Checkpoint {
            format_version: FORMAT_VERSION,
            plan: Some(plan),
            completed,
            runs: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("checkpoint serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Checkpoint {
            field: "<document>".into(),
            reason: format!("corrupt checkpoint: {e}"),
        })?;
        let obj = object(&value, "<document>")?;
        let version: u64 = field(obj, "format_version")?;
        if version != FORMAT_VERSION {
            return Err(Error::Checkpoint {
                field: "format_version".into(),
                reason: format!("unsupported version {version}, expected {FORMAT_VERSION}"),
            });
        }
        let runs = match obj.get("runs") {
            Some(Value::Array(items)) => items
                .iter()
                .map(RunState::from_value)
                .collect::<Result<Vec<_>>>()?,
            _ => {
                return Err(Error::Checkpoint {
                    field: "runs".into(),
                    reason: "missing or not an array".into(),
                })
            }
        };
        Ok(Checkpoint {
            format_version: version,
            plan: field(obj, "plan")?,
            completed: field(obj, "completed")?,
            runs,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        // Write-then-rename so an interrupted save never truncates the old file.
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_json())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn object<'a>(value: &'a Value, name: &str) -> Result<&'a Map<String, Value>> {
    value.as_object().ok_or_else(|| Error::Checkpoint {
        field: name.into(),
        reason: "expected a JSON object".into(),
    })
}

fn field<T: DeserializeOwned>(obj: &Map<String, Value>, name: &str) -> Result<T> {
    let value = obj.get(name).cloned().unwrap_or(Value::Null);
    serde_json::from_value(value).map_err(|e| Error::Checkpoint {
        field: name.into(),
        reason: e.to_string(),
    })
}

pub fn save_state(state: &WormState, path: &Path) -> Result<()> {
    Checkpoint::for_run(state).save(path)
}

pub fn load_state(path: &Path) -> Result<WormState> {
    let cp = Checkpoint::load(path)?;
    match cp.runs.as_slice() {
        [run] => run.restore(),
        other => Err(Error::Checkpoint {
            field: "runs".into(),
            reason: format!("expected exactly one run, found {}", other.len()),
        }),
    }
}

/// Saves `state` to `path` and loads it back.
pub fn checkpoint_roundtrip(state: &WormState, path: &Path) -> Result<WormState> {
    save_state(state, path)?;
    load_state(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_state_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let s = WormState::new(2, 7, true).unwrap();
        let back = checkpoint_roundtrip(&s, &path).unwrap();
        assert_eq!(RunState::capture(&back), RunState::capture(&s));
    }

    #[test]
    fn continuation_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let mut a = WormState::new(3, 21, true).unwrap();
        a.run(2000, None);
        let mut b = checkpoint_roundtrip(&a, &path).unwrap();
        for _ in 0..500 {
            assert_eq!(a.step(), b.step());
        }
        assert_eq!(a.holes_snapshot(), b.holes_snapshot());
    }

    #[test]
    fn damaged_files_name_the_field() {
        let s = WormState::new(2, 1, false).unwrap();
        let json = Checkpoint::for_run(&s).to_json();

        let truncated = &json[..json.len() / 2];
        assert!(matches!(
            Checkpoint::from_json(truncated),
            Err(Error::Checkpoint { .. })
        ));

        let bumped = json.replacen("\"format_version\": 1", "\"format_version\": 9", 1);
        match Checkpoint::from_json(&bumped) {
            Err(Error::Checkpoint { field, .. }) => assert_eq!(field, "format_version"),
            other => panic!("{other:?}"),
        }

        let bad_rng = json.replacen("\"rng_state\": \"", "\"rng_state\": \"zz", 1);
        let cp = Checkpoint::from_json(&bad_rng).unwrap();
        match cp.runs[0].restore() {
            Err(Error::Checkpoint { field, .. }) => assert_eq!(field, "rng_state"),
            other => panic!("{other:?}"),
        }

        let no_holes = json.replacen("\"holes\"", "\"hols\"", 1);
        match Checkpoint::from_json(&no_holes) {
            Err(Error::Checkpoint { field, .. }) => assert_eq!(field, "holes"),
            other => panic!("{other:?}"),
        }
    }
}
