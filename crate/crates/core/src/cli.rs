//! The `phylokit` command line.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data or numerical
//! errors. Every output file is written atomically.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::basisfit::{write_params_csv, BasisFamily, IceSettings, ParamRow};
use crate::evalmetrics::{evaluate_trial, ReportFile, TrialRecord};
use crate::imageops::{load_image, synth_ipt, DatasetManifest, GrayImage, TransformClass, TreeShape};
use crate::likelihood::{train_model_with_stats, DensityModel};
use crate::phylogeny::{pairwise_params, reconstruct, Reconstruction, DEFAULT_TAU};
use crate::{fsutil, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "phylokit", version, about = "Image phylogeny tree reconstruction")]
struct Cli {
    /// Worker threads for pair fitting (default: available parallelism).
    #[arg(long, global = true, env = "PHYLOKIT_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize a near-duplicate set with known ground truth.
    Synth(SynthArgs),
    /// Fit forward/reverse parameter densities from synthesized sets.
    Train(TrainArgs),
    /// Reconstruct phylogeny trees from a directory of images.
    Reconstruct(ReconstructArgs),
    /// Score reconstructions against ground-truth manifests.
    Evaluate(EvaluateArgs),
    /// Write fitted parameter vectors of every image pair as CSV.
    ExportParams(ExportArgs),
}

#[derive(Debug, Args)]
struct IceArgs {
    /// Ridge weight of the polynomial and Gabor solves.
    #[arg(long, default_value_t = IceSettings::default().lambda)]
    lambda: f64,
    /// Iteration cap of the polynomial and Gabor solves.
    #[arg(long, default_value_t = IceSettings::default().max_iters)]
    max_iters: usize,
    /// Convergence threshold on the update norm.
    #[arg(long, default_value_t = IceSettings::default().tol)]
    tol: f64,
}

impl IceArgs {
    fn settings(&self) -> Result<IceSettings> {
        let s = IceSettings { lambda: self.lambda, max_iters: self.max_iters, tol: self.tol };
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Seed (root) image.
    #[arg(long)]
    input: PathBuf,
    /// Tree shape: a preset name (pair, fig4a, fig4c, fig4d, fig5-1..fig5-4)
    /// or random:<n>:<seed>.
    #[arg(long)]
    shape: String,
    /// Edit class: photometric, geometric or mixed.
    #[arg(long, default_value = "photometric")]
    class: String,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Dataset manifest; repeat for several sets. Images are read from the
    /// manifest's directory.
    #[arg(long = "manifest", required = true)]
    manifests: Vec<PathBuf>,
    /// Basis family.
    #[arg(long)]
    family: String,
    /// Output model file.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    ice: IceArgs,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    /// Image directory; uses manifest.json ordering when present, otherwise
    /// the sorted .png/.pgm files.
    #[arg(long)]
    images: PathBuf,
    /// Trained model file.
    #[arg(long)]
    model: PathBuf,
    /// Basis family; must match the model (default: the model's family).
    #[arg(long)]
    family: Option<String>,
    /// Indicator threshold on the likelihood ratio.
    #[arg(long, default_value_t = DEFAULT_TAU)]
    tau: f64,
    /// Number of root candidates.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Output reconstruction JSON.
    #[arg(long)]
    out: PathBuf,
    /// Optional Graphviz output.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[command(flatten)]
    ice: IceArgs,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Reconstruction JSON; repeat together with --truth.
    #[arg(long = "recon", required = true)]
    recons: Vec<PathBuf>,
    /// Ground-truth manifest, paired with --recon in order.
    #[arg(long = "truth", required = true)]
    truths: Vec<PathBuf>,
    /// Output report JSON.
    #[arg(long)]
    out: PathBuf,
    /// Optional per-trial CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    /// Image directory (same ordering rules as `reconstruct`).
    #[arg(long)]
    images: PathBuf,
    /// Basis family.
    #[arg(long)]
    family: String,
    /// Output CSV.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    ice: IceArgs,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_data_error() {
                2
            } else {
                1
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Error::ParamDomain("--jobs must be >= 1".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Synth(a) => synth(a),
        Command::Train(a) => train(a),
        Command::Reconstruct(a) => reconstruct_cmd(a),
        Command::Evaluate(a) => evaluate(a),
        Command::ExportParams(a) => export(a),
    })
}

fn synth(a: SynthArgs) -> Result<()> {
    let shape: TreeShape = a.shape.parse()?;
    let class: TransformClass = a.class.parse()?;
    let img = load_image(&a.input)?;
    let set = synth_ipt(&img, &shape, class, a.seed)?;
    set.write(&a.out)?;
    eprintln!("wrote {} images to {}", set.images.len(), a.out.display());
    Ok(())
}

fn manifest_dir(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

fn train(a: TrainArgs) -> Result<()> {
    let family: BasisFamily = a.family.parse()?;
    let settings = a.ice.settings()?;
    let manifests =
        a.manifests.iter().map(|p| DatasetManifest::load(p)).collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for (path, m) in a.manifests.iter().zip(&manifests) {
        let images = m.load_images(manifest_dir(path))?;
        for e in &m.edges {
            pairs.push((images[e[0]].clone(), images[e[1]].clone()));
        }
    }
    eprintln!("training {family} on {} pairs", pairs.len());
    let (model, stats) = train_model_with_stats(&pairs, family, &settings)?;
    if stats.failed > 0 {
        eprintln!("skipped {} of {} pairs whose fit failed", stats.failed, stats.total);
    }
    model.save(&a.out)
}

/// Images of a directory with their file names.
fn load_image_dir(dir: &Path) -> Result<(Vec<String>, Vec<GrayImage>)> {
    let manifest = dir.join("manifest.json");
    if manifest.exists() {
        let m = DatasetManifest::load(&manifest)?;
        let images = m.load_images(dir)?;
        return Ok((m.images, images));
    }
    let mut names = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        let ext = Path::new(&name).extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        if matches!(ext.as_deref(), Some("png" | "pgm")) {
            names.push(name);
        }
    }
    names.sort();
    let images = names.iter().map(|n| load_image(dir.join(n))).collect::<Result<Vec<_>>>()?;
    Ok((names, images))
}

fn reconstruct_cmd(a: ReconstructArgs) -> Result<()> {
    let settings = a.ice.settings()?;
    if !(a.tau > 0.0) {
        return Err(Error::ParamDomain(format!("--tau must be > 0, got {}", a.tau)));
    }
    let model = DensityModel::load(&a.model)?;
    let family = match &a.family {
        Some(f) => f.parse()?,
        None => model.family(),
    };
    if family != model.family() {
        return Err(Error::ParamDomain(format!(
            "--family {family} does not match the model's {}",
            model.family()
        )));
    }
    let (names, images) = load_image_dir(&a.images)?;
    if a.k < 1 || a.k > images.len() {
        return Err(Error::ParamDomain(format!("--k must lie in 1..={}", images.len())));
    }
    eprintln!("fitting {} ordered pairs with {family}", images.len() * (images.len() - 1));
    let recon = reconstruct(&images, family, &model, &settings, a.tau, a.k)?;
    recon.save(&a.out)?;
    if let Some(dot) = &a.dot {
        fsutil::write_atomic(dot, recon.to_dot(&names)?.as_bytes())?;
    }
    Ok(())
}

fn evaluate(a: EvaluateArgs) -> Result<()> {
    if a.recons.len() != a.truths.len() {
        return Err(Error::ParamDomain(format!(
            "{} --recon files but {} --truth files",
            a.recons.len(),
            a.truths.len()
        )));
    }
    let mut trials = Vec::new();
    for (rp, tp) in a.recons.iter().zip(&a.truths) {
        let recon = Reconstruction::load(rp)?;
        let truth = DatasetManifest::load(tp)?.truth()?;
        let report = evaluate_trial(&recon, &truth)?;
        trials.push(TrialRecord {
            trial: rp.display().to_string(),
            true_root: truth.root(),
            candidates: recon.candidates.clone(),
            report,
        });
    }
    let file = ReportFile::new(trials)?;
    file.save_json(&a.out)?;
    if let Some(csv) = &a.csv {
        file.save_csv(csv)?;
    }
    Ok(())
}

fn export(a: ExportArgs) -> Result<()> {
    let family: BasisFamily = a.family.parse()?;
    let settings = a.ice.settings()?;
    let (_, images) = load_image_dir(&a.images)?;
    let mut rows = Vec::new();
    for f in pairwise_params(&images, family, &settings)? {
        let pair_id = format!("{}-{}", f.i, f.j);
        rows.push(ParamRow { pair_id: pair_id.clone(), direction: "ij".into(), params: f.ij });
        rows.push(ParamRow { pair_id, direction: "ji".into(), params: f.ji });
    }
    write_params_csv(&rows, &a.out)
}
