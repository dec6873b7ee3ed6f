//! Machine-readable (JSON) and human-readable renderings of results.
//!
//! All vertices are 1-based and all rationals are `"p/q"` strings.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::bounds::{upper_step, BoundVector};
use crate::embed::Embedding;
use crate::feasibility::{InfeasibilityCertificate, ThresholdVector};
use crate::matrix::RobinsonMatrix;
use crate::pathgen::{BoundTable, CycleRecord};
use crate::rational::{parse_rational, ParseRationalError, Rational, Show};
use crate::solve::SolveOutcome;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub cycles: Vec<Vec<usize>>,
    pub bounds: Vec<Vec<i32>>,
    pub explanation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SolveJson {
    Feasible { d: Vec<String>, pi: Vec<String> },
    Infeasible { certificate: CertificateJson },
}

/// `{"d": [...], "pi": [...]}`, also the input format of `embed --check`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub d: Vec<String>,
    pub pi: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathJson {
    pub bound: Vec<i32>,
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleJson {
    pub vertices: Vec<usize>,
    pub bound: Vec<i32>,
}

/// Keys of `pairs` are `"i,j"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsJson {
    pub pairs: BTreeMap<String, Vec<PathJson>>,
    pub cycles: Vec<CycleJson>,
}

fn one_based(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

fn strings(values: &[Rational]) -> Vec<String> {
    values
        .iter()
        .map(crate::rational::format_rational)
        .collect()
}

impl CertificateJson {
    pub fn from_certificate(cert: &InfeasibilityCertificate) -> Self {
        CertificateJson {
            cycles: cert.cycles.iter().map(|c| one_based(&c.vertices)).collect(),
            bounds: cert
                .cycles
                .iter()
                .map(|c| c.bound.coeffs().to_vec())
                .collect(),
            explanation: cert.conflict.to_string(),
        }
    }

    /// Cycles as 0-based records, with the stated bounds.
    pub fn to_cycles(&self) -> Result<Vec<CycleRecord>, String> {
        if self.cycles.len() != self.bounds.len() {
            return Err(format!(
                "{} cycles but {} bounds",
                self.cycles.len(),
                self.bounds.len()
            ));
        }
        self.cycles
            .iter()
            .zip(&self.bounds)
            .map(|(vs, b)| {
                if vs.contains(&0) {
                    return Err("vertices are 1-based".to_string());
                }
                Ok(CycleRecord {
                    bound: BoundVector::new(b.clone()),
                    vertices: vs.iter().map(|v| v - 1).collect(),
                })
            })
            .collect()
    }
}

impl SolveJson {
    pub fn from_outcome(outcome: &SolveOutcome) -> Self {
        match outcome {
            SolveOutcome::Feasible(s) => SolveJson::Feasible {
                d: strings(s.d.values()),
                pi: strings(s.pi.values()),
            },
            SolveOutcome::Infeasible(cert) => SolveJson::Infeasible {
                certificate: CertificateJson::from_certificate(cert),
            },
        }
    }
}

impl EmbeddingJson {
    pub fn new(d: &ThresholdVector, pi: &Embedding) -> Self {
        EmbeddingJson {
            d: strings(d.values()),
            pi: strings(pi.values()),
        }
    }

    pub fn parse(&self) -> Result<(Vec<Rational>, Vec<Rational>), ParseRationalError> {
        let parse_all = |xs: &[String]| {
            xs.iter()
                .map(|x| parse_rational(x))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok((parse_all(&self.d)?, parse_all(&self.pi)?))
    }
}

impl BoundsJson {
    pub fn from_table(table: &BoundTable) -> Self {
        let mut pairs = BTreeMap::new();
        for i in 0..table.n() {
            for j in 0..table.n() {
                if i == j {
                    continue;
                }
                let paths = table.minimal_paths(i, j);
                if paths.is_empty() {
                    continue;
                }
                pairs.insert(
                    format!("{},{}", i + 1, j + 1),
                    paths
                        .iter()
                        .map(|p| PathJson {
                            bound: p.bound.coeffs().to_vec(),
                            path: one_based(&p.vertices),
                        })
                        .collect(),
                );
            }
        }
        let cycles = table
            .extract_cycles()
            .iter()
            .map(|c| CycleJson {
                vertices: one_based(&c.vertices),
                bound: c.bound.coeffs().to_vec(),
            })
            .collect();
        BoundsJson { pairs, cycles }
    }
}

pub fn format_vector(values: &[Rational], float: bool) -> String {
    let parts: Vec<String> = values
        .iter()
        .map(|value| Show { value, float }.to_string())
        .collect();
    parts.join(", ")
}

/// One line per step: endpoints, similarity level and step bound.
pub fn describe_cycle(m: &RobinsonMatrix, cycle: &CycleRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "cycle {cycle}");
    for pair in cycle.vertices.windows(2) {
        let (u, v) = (pair[0], pair[1]);
        let step = upper_step(m, u, v)
            .map(|b| b.to_string())
            .unwrap_or_else(|| "illegal".to_string());
        let dir = if u < v { "forward" } else { "backward" };
        let _ = writeln!(
            out,
            "  {} -> {}  level {}  {dir:<8}  {step}",
            u + 1,
            v + 1,
            m.get(u, v)
        );
    }
    out
}

pub fn describe_certificate(m: &RobinsonMatrix, cert: &InfeasibilityCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NO SOLUTION");
    let _ = writeln!(out, "reason: {}", cert.conflict);
    for c in &cert.cycles {
        out.push_str(&describe_cycle(m, c));
    }
    out
}

pub fn describe_solution(d: &ThresholdVector, pi: &Embedding, float: bool) -> String {
    format!(
        "feasible\nd  = ({})\npi = ⟨{}⟩\n",
        format_vector(d.values(), float),
        format_vector(pi.values(), float)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::fixtures::{a, b};
    use crate::pathgen::generate_bound_tables;
    use crate::solve::{solve, Method};

    #[test]
    fn solve_json_round_trips() {
        for m in [a(), b()] {
            let outcome = solve(&m, Method::Auto).unwrap();
            let json = SolveJson::from_outcome(&outcome);
            let text = serde_json::to_string(&json).unwrap();
            let back: SolveJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back, json);
        }
        let text = serde_json::to_string(&SolveJson::from_outcome(
            &solve(&a(), Method::Auto).unwrap(),
        ))
        .unwrap();
        assert!(
            text.starts_with(r#"{"status":"feasible","d":["1","#),
            "{text}"
        );
    }

    #[test]
    fn certificate_json_recovers_cycles() {
        let SolveOutcome::Infeasible(cert) = solve(&b(), Method::Auto).unwrap() else {
            panic!("B is infeasible")
        };
        let json = CertificateJson::from_certificate(&cert);
        assert_eq!(json.to_cycles().unwrap(), cert.cycles);
    }

    #[test]
    fn bounds_json_lists_example_cells() {
        let json = BoundsJson::from_table(&generate_bound_tables(&a()));
        let bounds: Vec<Vec<i32>> = json.pairs["1,5"].iter().map(|p| p.bound.clone()).collect();
        assert_eq!(bounds, vec![vec![0, 4], vec![1, 1]]);
        assert_eq!(json.pairs["1,2"][0].path, vec![1, 2]);
        let text = serde_json::to_string(&json).unwrap();
        assert_eq!(serde_json::from_str::<BoundsJson>(&text).unwrap(), json);
    }

    #[test]
    fn cycle_description_lists_levels() {
        let b = b();
        let c = CycleRecord {
            bound: BoundVector::zero(2),
            vertices: vec![0, 1, 5, 3, 0],
        };
        let text = describe_cycle(&b, &c);
        assert!(text.contains("1 -> 2  level 2"), "{text}");
        assert!(text.contains("4 -> 1  level 0"), "{text}");
    }
}
