//! JSON schedule documents:
//! `{"assignments": [{"camera_id", "slot", "start", "length", "robust_rate"}], "total_rbs", "status"}`.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CandidateAllocation, Schedule};
use crate::scalar::Rate;
use crate::scenario::from_json;
use crate::solvers::common::{SolverResult, Status};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>"))]
pub struct ScheduleDocument<R> {
    pub assignments: Vec<CandidateAllocation<R>>,
    pub total_rbs: usize,
    pub status: Status,
}

impl<R: Rate> ScheduleDocument<R> {
    pub fn from_result(result: &SolverResult<R>) -> Self {
        Self {
            assignments: result.schedule.assignments.clone(),
            total_rbs: result.schedule.total_rbs,
            status: result.status,
        }
    }

    /// The schedule as written; `total_rbs` is kept as claimed so the
    /// verifier can check it.
    pub fn to_schedule(&self) -> Schedule<R> {
        let mut s = Schedule::from_parts(self.assignments.clone(), Default::default());
        s.total_rbs = self.total_rbs;
        s
    }
}

pub fn save_schedule<R: Rate + Serialize>(result: &SolverResult<R>) -> Result<String> {
    serde_json::to_string_pretty(&ScheduleDocument::from_result(result))
        .map_err(|e| Error::invalid(e.to_string()))
}

pub fn load_schedule<R: Rate + DeserializeOwned>(text: &str) -> Result<ScheduleDocument<R>> {
    let doc: ScheduleDocument<R> = from_json(text)?;
    for (i, a) in doc.assignments.iter().enumerate() {
        if a.slot == 0 || a.start == 0 || a.length == 0 {
            return Err(Error::parse(
                format!("assignments[{i}]"),
                "slot, start and length are 1-based and positive",
            ));
        }
    }
    Ok(doc)
}
