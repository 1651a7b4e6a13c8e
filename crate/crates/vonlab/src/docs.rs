//! Interchange documents. Each file holds exactly one document kind.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use vonlab_core::dynamics::{FiniteAction, FiniteEquivRelation, FiniteMeasuredSpace};
use vonlab_core::groupvna::FiniteGroup;
use vonlab_core::reps::UnitaryRep;
use vonlab_core::tensor::EigenvalueList;
use vonlab_core::{Mat, Tol, C64};

use crate::error::CliError;

/// `{ rows, cols, data: [[re, im], ...] }`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&Mat> for MatrixDoc {
    fn from(m: &Mat) -> Self {
        MatrixDoc {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl MatrixDoc {
    pub fn to_mat(&self, what: &str) -> Result<Mat, CliError> {
        let data = self.data.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        Mat::from_vec(self.rows, self.cols, data)
            .map_err(|e| CliError::from(e).context(what))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub ambient_dim: usize,
    pub generators: Vec<MatrixDoc>,
    /// Projections to compare under `algebra decompose`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<MatrixDoc>,
}

impl AlgebraDoc {
    pub fn generators(&self) -> Result<Vec<Mat>, CliError> {
        let mut errors = Vec::new();
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            match g.to_mat(&format!("generator {i}")) {
                Ok(m) if m.shape() != (self.ambient_dim, self.ambient_dim) => errors.push(format!(
                    "generator {i} is {}x{}, ambient_dim is {}",
                    m.rows(),
                    m.cols(),
                    self.ambient_dim
                )),
                Ok(m) => out.push(m),
                Err(e) => errors.extend(e.messages()),
            }
        }
        if errors.is_empty() {
            Ok(out)
        } else {
            Err(CliError::Validation(errors))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl From<&FiniteGroup> for GroupDoc {
    fn from(g: &FiniteGroup) -> Self {
        GroupDoc {
            order: g.order(),
            table: g.table().to_vec(),
            labels: g.labels().map(<[String]>::to_vec),
        }
    }
}

impl GroupDoc {
    pub fn to_group(&self) -> Result<FiniteGroup, CliError> {
        if self.table.len() != self.order {
            return Err(CliError::validation(format!(
                "order is {} but the table has {} rows",
                self.order,
                self.table.len()
            )));
        }
        let g = FiniteGroup::new(self.table.clone())?;
        Ok(match &self.labels {
            Some(l) => g.with_labels(l.clone())?,
            None => g,
        })
    }
}

/// A group given by table or by built-in name such as `"symmetric(3)"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Builtin(String),
    Table(GroupDoc),
}

impl GroupSpec {
    pub fn to_group(&self) -> Result<FiniteGroup, CliError> {
        match self {
            GroupSpec::Builtin(name) => Ok(FiniteGroup::builtin(name)?),
            GroupSpec::Table(doc) => doc.to_group(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    pub weights: Vec<f64>,
}

impl From<&FiniteMeasuredSpace> for SpaceDoc {
    fn from(s: &FiniteMeasuredSpace) -> Self {
        SpaceDoc {
            points: s.labels().to_vec(),
            weights: s.weights().to_vec(),
        }
    }
}

impl SpaceDoc {
    pub fn to_space(&self) -> Result<FiniteMeasuredSpace, CliError> {
        Ok(FiniteMeasuredSpace::new(self.points.clone(), self.weights.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionDoc {
    pub group: GroupSpec,
    pub space: SpaceDoc,
    /// `map[γ][x] = σ_γ(x)`.
    pub map: Vec<Vec<usize>>,
}

impl From<&FiniteAction> for ActionDoc {
    fn from(a: &FiniteAction) -> Self {
        ActionDoc {
            group: GroupSpec::Table(a.group().into()),
            space: a.space().into(),
            map: a.map().to_vec(),
        }
    }
}

impl ActionDoc {
    pub fn to_action(&self) -> Result<FiniteAction, CliError> {
        let (g, s) = both(self.group.to_group(), self.space.to_space())?;
        Ok(FiniteAction::new(g, s, self.map.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub space: SpaceDoc,
    pub classes: Vec<Vec<usize>>,
}

impl From<&FiniteEquivRelation> for RelationDoc {
    fn from(e: &FiniteEquivRelation) -> Self {
        RelationDoc {
            space: e.space().into(),
            classes: e.classes().to_vec(),
        }
    }
}

impl RelationDoc {
    pub fn to_relation(&self) -> Result<FiniteEquivRelation, CliError> {
        Ok(FiniteEquivRelation::new(self.space.to_space()?, self.classes.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueListDoc {
    pub rows: Vec<Vec<f64>>,
}

impl From<&EigenvalueList> for EigenvalueListDoc {
    fn from(l: &EigenvalueList) -> Self {
        EigenvalueListDoc {
            rows: l.rows().to_vec(),
        }
    }
}

impl EigenvalueListDoc {
    pub fn to_list(&self) -> Result<EigenvalueList, CliError> {
        Ok(EigenvalueList::new(self.rows.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepDoc {
    pub group: GroupSpec,
    pub dim: usize,
    pub matrices: Vec<MatrixDoc>,
}

impl From<&UnitaryRep> for RepDoc {
    fn from(r: &UnitaryRep) -> Self {
        RepDoc {
            group: GroupSpec::Table(r.group().into()),
            dim: r.dim(),
            matrices: r.matrices().iter().map(MatrixDoc::from).collect(),
        }
    }
}

impl RepDoc {
    pub fn to_rep(&self, tol: Tol) -> Result<UnitaryRep, CliError> {
        let group = self.group.to_group()?;
        let mut errors = Vec::new();
        let mut mats = Vec::new();
        for (i, m) in self.matrices.iter().enumerate() {
            match m.to_mat(&format!("matrix {i}")) {
                Ok(x) if x.shape() != (self.dim, self.dim) => errors.push(format!(
                    "matrix {i} is {}x{}, dim is {}",
                    x.rows(),
                    x.cols(),
                    self.dim
                )),
                Ok(x) => mats.push(x),
                Err(e) => errors.extend(e.messages()),
            }
        }
        if !errors.is_empty() {
            return Err(CliError::Validation(errors));
        }
        Ok(UnitaryRep::new(group, mats, tol)?)
    }
}

fn both<A, B>(a: Result<A, CliError>, b: Result<B, CliError>) -> Result<(A, B), CliError> {
    match (a, b) {
        (Ok(a), Ok(b)) => Ok((a, b)),
        (a, b) => {
            let mut msgs = Vec::new();
            if let Err(e) = a {
                msgs.extend(e.messages());
            }
            if let Err(e) = b {
                msgs.extend(e.messages());
            }
            Err(CliError::Validation(msgs))
        }
    }
}

pub fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    parse_doc(&text).map_err(|e| e.context(&path.display().to_string()))
}

pub fn parse_doc<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::validation(format!("malformed document: {e}")))
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    // documents are plain data; serialization cannot fail
    serde_json::to_string_pretty(doc).expect("serializable document")
}
