//! The wire formats: matrix and algebra-spec JSON, trace CSV/JSON export.
//!
//! Matrix JSON is `{"n": int, "re": [[..]], "im": [[..]]}`, row-major,
//! IEEE-754 doubles. Serialization goes through serde_json's shortest
//! round-trip float printing, so written values re-parse bit-exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::LieAlgebraSpec;
use crate::cartan::GeodesicTrace;
use crate::config::ToleranceConfig;
use crate::error::{CoreError, Result};
use crate::flow::FlowTrace;
use crate::matrix::ComplexMatrix;

/// JSON representation of a [`ComplexMatrix`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.n();
        let row = |part: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| part(&m.get(i, j))).collect())
                .collect()
        };
        Self {
            n,
            re: row(|z| z.re),
            im: row(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.n;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(CoreError::MalformedJson(format!(
                "matrix payload does not match n = {n}"
            )));
        }
        ComplexMatrix::new(ndarray::Array2::from_shape_fn((n, n), |(i, j)| {
            Complex64::new(self.re[i][j], self.im[i][j])
        }))
    }
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(m)).expect("matrix serializes")
}

pub fn matrix_from_json(s: &str) -> Result<ComplexMatrix> {
    let parsed: MatrixJson =
        serde_json::from_str(s).map_err(|e| CoreError::MalformedJson(e.to_string()))?;
    parsed.to_matrix()
}

/// JSON representation of a [`LieAlgebraSpec`], tagged by family.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum AlgebraSpecJson {
    #[serde(rename = "su")]
    Su {
        n: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        rho: Option<f64>,
    },
    #[serde(rename = "custom")]
    Custom {
        basis: Vec<MatrixJson>,
        cartan_indices: Vec<usize>,
        rho: f64,
    },
}

impl AlgebraSpecJson {
    pub fn build(&self, cfg: &ToleranceConfig) -> Result<LieAlgebraSpec> {
        match self {
            AlgebraSpecJson::Su { n, rho } => match rho {
                Some(r) => LieAlgebraSpec::su_with_rho(*n, *r),
                None => LieAlgebraSpec::su(*n),
            },
            AlgebraSpecJson::Custom {
                basis,
                cartan_indices,
                rho,
            } => {
                let mats: Result<Vec<ComplexMatrix>> =
                    basis.iter().map(|b| b.to_matrix()).collect();
                LieAlgebraSpec::custom(mats?, cartan_indices.clone(), *rho, cfg)
            }
        }
    }
}

pub fn algebra_spec_from_json(s: &str, cfg: &ToleranceConfig) -> Result<LieAlgebraSpec> {
    let parsed: AlgebraSpecJson =
        serde_json::from_str(s).map_err(|e| CoreError::MalformedJson(e.to_string()))?;
    parsed.build(cfg)
}

fn push_matrix_columns(header: &mut String, n: usize) {
    for i in 0..n {
        for j in 0..n {
            header.push_str(&format!(",re_{i}{j},im_{i}{j}"));
        }
    }
}

fn push_matrix_cells(line: &mut String, m: &ComplexMatrix) {
    let n = m.n();
    for i in 0..n {
        for j in 0..n {
            let z = m.get(i, j);
            line.push_str(&format!(",{},{}", z.re, z.im));
        }
    }
}

/// CSV export of a flow trace: `t,unitarity_defect`, then the matrix
/// entries as `re_ij,im_ij` pairs, row-major. Header row included.
pub fn flow_trace_csv(trace: &FlowTrace) -> String {
    let n = trace.elements.first().map(|m| m.n()).unwrap_or(0);
    let mut out = String::from("t,unitarity_defect");
    push_matrix_columns(&mut out, n);
    out.push('\n');
    for ((t, defect), m) in trace
        .times
        .iter()
        .zip(&trace.defects)
        .zip(&trace.elements)
    {
        out.push_str(&format!("{t},{defect}"));
        push_matrix_cells(&mut out, m);
        out.push('\n');
    }
    out
}

/// CSV export of a geodesic trace: `t,speed,horizontality_defect,
/// curvature_fd_estimate` (blank where not computed), then matrix entries
/// as in the flow CSV.
pub fn geodesic_trace_csv(trace: &GeodesicTrace) -> String {
    let n = trace.elements.first().map(|m| m.n()).unwrap_or(0);
    let mut out = String::from("t,speed,horizontality_defect,curvature_fd_estimate");
    push_matrix_columns(&mut out, n);
    out.push('\n');
    for i in 0..trace.times.len() {
        out.push_str(&format!(
            "{},{},{}",
            trace.times[i], trace.speeds[i], trace.horizontality_defects[i]
        ));
        match trace.curvature_fd[i] {
            Some(k) => out.push_str(&format!(",{k}")),
            None => out.push(','),
        }
        push_matrix_cells(&mut out, &trace.elements[i]);
        out.push('\n');
    }
    out
}

/// JSON mirror of the flow CSV.
#[derive(Serialize)]
pub struct FlowTraceJson {
    pub times: Vec<f64>,
    pub unitarity_defects: Vec<f64>,
    pub elements: Vec<MatrixJson>,
}

impl FlowTraceJson {
    pub fn from_trace(trace: &FlowTrace) -> Self {
        Self {
            times: trace.times.clone(),
            unitarity_defects: trace.defects.clone(),
            elements: trace.elements.iter().map(MatrixJson::from_matrix).collect(),
        }
    }
}

/// JSON mirror of the geodesic CSV, with the constant curvature attached.
#[derive(Serialize)]
pub struct GeodesicTraceJson {
    pub times: Vec<f64>,
    pub speeds: Vec<f64>,
    pub horizontality_defects: Vec<f64>,
    pub curvature: Option<f64>,
    pub curvature_fd: Vec<Option<f64>>,
    pub elements: Vec<MatrixJson>,
}

impl GeodesicTraceJson {
    pub fn from_trace(trace: &GeodesicTrace) -> Self {
        Self {
            times: trace.times.clone(),
            speeds: trace.speeds.clone(),
            horizontality_defects: trace.horizontality_defects.clone(),
            curvature: trace.curvature,
            curvature_fd: trace.curvature_fd.clone(),
            elements: trace.elements.iter().map(MatrixJson::from_matrix).collect(),
        }
    }
}
