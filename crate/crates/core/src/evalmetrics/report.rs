use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{entropy_delta, root_rank_hit, tree_accuracy, von_neumann_entropy};
use crate::phylogeny::{span_ipt, PhylogenyTree, Reconstruction};
use crate::{fsutil, Error, Result};

/// Scores of one reconstruction against its ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Hit at ranks 1, 2 and 3.
    pub root_rank_hits: [bool; 3],
    /// Edge recovery of the tree spanned from the true root.
    pub ipt_accuracy: f64,
    /// Edge recovery of the top-ranked candidate's tree.
    pub ipt_accuracy_top: f64,
    pub entropy_recon: f64,
    pub entropy_truth: f64,
    pub entropy_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialRecord {
    pub trial: String,
    pub true_root: usize,
    pub candidates: Vec<usize>,
    pub report: EvalReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Aggregate {
    pub n_trials: usize,
    pub rank1: f64,
    pub rank2: f64,
    pub rank3: f64,
    pub mean_ipt_accuracy: f64,
    pub mean_ipt_accuracy_top: f64,
    pub entropy_delta_mean: f64,
    /// Sample standard deviation; 0 for a single trial.
    pub entropy_delta_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub trials: Vec<TrialRecord>,
    pub aggregate: Aggregate,
}

/// Scores `recon` against `truth`. Edge accuracy and entropy use the tree
/// spanned from the true root over the stored indicator and similarity.
pub fn evaluate_trial(recon: &Reconstruction, truth: &PhylogenyTree) -> Result<EvalReport> {
    if recon.node_count() != truth.node_count() {
        return Err(Error::Input(format!(
            "reconstruction has {} nodes, truth has {}",
            recon.node_count(),
            truth.node_count()
        )));
    }
    let hits = [1, 2, 3].map(|k| root_rank_hit(&recon.candidates, truth.root(), k));
    let rooted = span_ipt(&recon.indicator, &recon.similarity, truth.root())?;
    let entropy_truth = von_neumann_entropy(&truth.to_graph())?;
    let entropy_recon = von_neumann_entropy(&rooted.to_graph())?;
    Ok(EvalReport {
        root_rank_hits: hits,
        ipt_accuracy: tree_accuracy(&rooted, truth)?,
        ipt_accuracy_top: tree_accuracy(&recon.trees[0], truth)?,
        entropy_recon,
        entropy_truth,
        entropy_delta: entropy_delta(truth, &rooted)?,
    })
}

impl Aggregate {
    pub fn from_reports<'a>(reports: impl IntoIterator<Item = &'a EvalReport>) -> Result<Self> {
        let reports: Vec<&EvalReport> = reports.into_iter().collect();
        if reports.is_empty() {
            return Err(Error::InsufficientData("no trials to aggregate".into()));
        }
        let n = reports.len() as f64;
        let rate = |k: usize| reports.iter().filter(|r| r.root_rank_hits[k]).count() as f64 / n;
        let mean = |f: fn(&EvalReport) -> f64| reports.iter().map(|r| f(r)).sum::<f64>() / n;
        let delta_mean = mean(|r| r.entropy_delta);
        let delta_std = if reports.len() > 1 {
            (reports.iter().map(|r| (r.entropy_delta - delta_mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            n_trials: reports.len(),
            rank1: rate(0),
            rank2: rate(1),
            rank3: rate(2),
            mean_ipt_accuracy: mean(|r| r.ipt_accuracy),
            mean_ipt_accuracy_top: mean(|r| r.ipt_accuracy_top),
            entropy_delta_mean: delta_mean,
            entropy_delta_std: delta_std,
        })
    }
}

impl ReportFile {
    pub fn new(trials: Vec<TrialRecord>) -> Result<Self> {
        let aggregate = Aggregate::from_reports(trials.iter().map(|t| &t.report))?;
        Ok(Self { trials, aggregate })
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        fsutil::write_json(path.as_ref(), self)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "trial,true_root,candidates,hit1,hit2,hit3,ipt_accuracy,ipt_accuracy_top,entropy_truth,entropy_recon,entropy_delta\n",
        );
        for t in &self.trials {
            let r = &t.report;
            let cands: Vec<String> = t.candidates.iter().map(ToString::to_string).collect();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                t.trial.replace(',', ";"),
                t.true_root,
                cands.join(" "),
                r.root_rank_hits[0] as u8,
                r.root_rank_hits[1] as u8,
                r.root_rank_hits[2] as u8,
                r.ipt_accuracy,
                r.ipt_accuracy_top,
                r.entropy_truth,
                r.entropy_recon,
                r.entropy_delta
            )
            .unwrap();
        }
        out
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        fsutil::write_atomic(path.as_ref(), self.to_csv().as_bytes())
    }
}
