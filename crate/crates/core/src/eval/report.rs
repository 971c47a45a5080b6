use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::metrics::{stable_mean, MetricScores};
use crate::baselines::PipelineKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleResult {
    pub pipeline: PipelineKind,
    pub sample: usize,
    pub intent: String,
    pub answer: Option<String>,
    pub scores: Option<MetricScores>,
    pub duration_seconds: f64,
    pub error: Option<String>,
    pub notes: Vec<String>,
}

impl SampleResult {
    pub(crate) fn new(pipeline: PipelineKind, sample: usize, intent: &str) -> Self {
        Self {
            pipeline,
            sample,
            intent: intent.to_string(),
            answer: None,
            scores: None,
            duration_seconds: 0.0,
            error: None,
            notes: Vec::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.scores.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSummary {
    pub pipeline: PipelineKind,
    pub samples: usize,
    pub failures: usize,
    pub means: MetricScores,
    pub mean_duration_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub pipelines: Vec<PipelineSummary>,
    pub samples: Vec<SampleResult>,
}

impl EvalReport {
    pub(crate) fn from_samples(pipelines: &[PipelineKind], samples: Vec<SampleResult>) -> Self {
        let summaries = pipelines
            .iter()
            .map(|&p| {
                let mine: Vec<&SampleResult> = samples.iter().filter(|s| s.pipeline == p).collect();
                let scored: Vec<&MetricScores> = mine.iter().filter_map(|s| s.scores.as_ref()).collect();
                let mean_of = |i: usize| {
                    let mut v: Vec<f64> = scored.iter().filter_map(|s| s.values()[i]).collect();
                    stable_mean(&mut v)
                };
                let mut durations: Vec<f64> = mine.iter().map(|s| s.duration_seconds).collect();
                PipelineSummary {
                    pipeline: p,
                    samples: mine.len(),
                    failures: mine.len() - scored.len(),
                    means: MetricScores {
                        context_precision: mean_of(0),
                        context_recall: mean_of(1),
                        context_entity_recall: mean_of(2),
                        answer_relevancy: mean_of(3),
                        answer_correctness: mean_of(4),
                        faithfulness: mean_of(5),
                    },
                    mean_duration_seconds: stable_mean(&mut durations),
                }
            })
            .collect();
        Self { pipelines: summaries, samples }
    }

    pub fn summary(&self, pipeline: PipelineKind) -> Option<&PipelineSummary> {
        self.pipelines.iter().find(|s| s.pipeline == pipeline)
    }

    /// Copy with every duration zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        let mut copy = self.clone();
        for s in &mut copy.samples {
            s.duration_seconds = 0.0;
        }
        for p in &mut copy.pipelines {
            p.mean_duration_seconds = p.mean_duration_seconds.map(|_| 0.0);
        }
        copy
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn rows(&self) -> Vec<(String, Vec<Option<f64>>)> {
        let mut rows: Vec<(String, Vec<Option<f64>>)> = MetricScores::NAMES
            .iter()
            .enumerate()
            .map(|(i, name)| (name.to_string(), self.pipelines.iter().map(|p| p.means.values()[i]).collect()))
            .collect();
        rows.push((
            "translation_time_seconds".into(),
            self.pipelines.iter().map(|p| p.mean_duration_seconds).collect(),
        ));
        rows
    }

    /// One row per metric plus mean translation time, one column per pipeline.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric");
        for p in &self.pipelines {
            write!(out, ",{}", p.pipeline).unwrap();
        }
        out.push('\n');
        for (name, values) in self.rows() {
            out.push_str(&name);
            for v in values {
                out.push(',');
                if let Some(v) = v {
                    write!(out, "{v}").unwrap();
                }
            }
            out.push('\n');
        }
        out
    }

    /// Fixed-width table for terminals.
    pub fn to_table(&self) -> String {
        let mut out = format!("{:<26}", "metric");
        for p in &self.pipelines {
            write!(out, "{:>14}", p.pipeline.as_str()).unwrap();
        }
        out.push('\n');
        for (name, values) in self.rows() {
            write!(out, "{name:<26}").unwrap();
            for v in values {
                match v {
                    Some(v) => write!(out, "{v:>14.4}").unwrap(),
                    None => write!(out, "{:>14}", "-").unwrap(),
                }
            }
            out.push('\n');
        }
        let failures: Vec<String> =
            self.pipelines.iter().filter(|p| p.failures > 0).map(|p| format!("{}={}", p.pipeline, p.failures)).collect();
        if !failures.is_empty() {
            writeln!(out, "failed samples: {}", failures.join(", ")).unwrap();
        }
        out
    }
}
