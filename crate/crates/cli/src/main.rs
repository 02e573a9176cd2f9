use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use berrysynth::dataset::{
    export, import_real, mix, DatasetManifest, ExportOptions, ImageFormat, LabelFormat, MixSpec,
    Preset, Resample, SplitSpec,
};
use berrysynth::eval::{
    evaluate, load_predictions, report_table, ApMode, ClassMode, EvalConfig, MeanMetrics,
    MetricsReport,
};
use berrysynth::par::{threads_from_env, with_threads, Exec};
use berrysynth::pipeline;
use berrysynth::scenegen::GenerationConfig;

/// Synthetic strawberry detection data: generate, mix, export and score.
#[derive(Parser)]
#[command(name = "berrysynth", version)]
struct Cli {
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    /// Suppress progress output.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a simulated corpus with labels and a manifest.
    Generate {
        /// TOML generation config; defaults are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of images.
        #[arg(long)]
        count: Option<usize>,
        /// Also write a PNG next to every PPM.
        #[arg(long)]
        png: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a manifest from a real, already annotated image folder.
    ImportReal {
        #[arg(long)]
        root: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Yolo)]
        format: Format,
        /// Manifest path to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw train/test splits for a preset and export each at 416x416.
    Mix {
        /// Manifest of real images (from import-real).
        #[arg(long)]
        real: PathBuf,
        /// Manifest of simulated images (from generate).
        #[arg(long)]
        sim: PathBuf,
        /// real-only, half-half, 5x-sim, sim-only or custom:REAL,SIM,TEST
        #[arg(long)]
        preset: Preset,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        repetitions: usize,
        /// Draw a fresh test set for this preset instead of the shared one.
        #[arg(long)]
        independent_test: bool,
        #[command(flatten)]
        export: ExportArgs,
        /// Receives rep<N>/train and rep<N>/test.
        #[arg(long)]
        out: PathBuf,
    },
    /// Export a manifest to a detector-ready layout.
    Export {
        #[arg(long)]
        manifest: PathBuf,
        #[command(flatten)]
        export: ExportArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score prediction files against ground-truth manifests.
    ///
    /// Pass one --gt per --predictions, or a single --gt shared by all.
    /// Several runs are averaged into one table row.
    Evaluate {
        #[arg(long, required = true)]
        predictions: Vec<PathBuf>,
        #[arg(long, required = true)]
        gt: Vec<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        iou_thresh: f64,
        #[arg(long, default_value_t = 0.5)]
        conf_thresh: f64,
        #[arg(long, value_enum, default_value_t = ApModeArg::PrAuc)]
        ap_mode: ApModeArg,
        /// Match ripe and unripe separately and average AP over classes.
        #[arg(long)]
        per_class: bool,
        /// Row label for the printed table.
        #[arg(long, default_value = "Evaluated")]
        label: String,
        /// Write the reports and their mean as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a results table from `evaluate --out` files.
    Report {
        files: Vec<PathBuf>,
        /// Render the published reference values instead.
        #[arg(long, conflicts_with = "files")]
        reference: bool,
    },
}

#[derive(clap::Args)]
struct ExportArgs {
    #[arg(long, value_enum, default_value_t = Format::Yolo)]
    format: Format,
    /// Output images are SIZE x SIZE.
    #[arg(long, default_value_t = 416)]
    size: u32,
    /// Merge ripe and unripe into one class.
    #[arg(long)]
    single_class: bool,
    #[arg(long, value_enum, default_value_t = ImageArg::Ppm)]
    image_format: ImageArg,
    /// Bilinear instead of nearest-neighbour resampling.
    #[arg(long)]
    bilinear: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Yolo,
    Coco,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImageArg {
    Ppm,
    Png,
}

#[derive(Clone, Copy, ValueEnum)]
enum ApModeArg {
    PrAuc,
    ThresholdMean,
}

impl From<Format> for LabelFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Yolo => LabelFormat::Yolo,
            Format::Coco => LabelFormat::Coco,
        }
    }
}

impl ExportArgs {
    fn options(&self, exec: Exec) -> ExportOptions {
        ExportOptions {
            format: self.format.into(),
            target_size: self.size,
            single_class: self.single_class,
            image_format: match self.image_format {
                ImageArg::Ppm => ImageFormat::Ppm,
                ImageArg::Png => ImageFormat::Png,
            },
            resample: if self.bilinear {
                Resample::Bilinear
            } else {
                Resample::Nearest
            },
            exec,
        }
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct EvalRecord {
    label: String,
    mean: MeanMetrics,
    runs: Vec<MetricsReport>,
}

const REFERENCE_ROWS: [(&str, f64, f64); 4] = [
    ("Real only", 0.978, 0.993),
    ("Half real half sim", 0.976, 0.982),
    ("5x more sim", 0.983, 0.993),
    ("Sim only", 0.077, 0.03),
];

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match with_threads(threads_from_env(), || run(cli.command, exec, cli.quiet)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command, exec: Exec, quiet: bool) -> anyhow::Result<()> {
    match command {
        Command::Generate {
            config,
            seed,
            count,
            png,
            out,
        } => {
            let mut cfg = match &config {
                Some(path) => GenerationConfig::load(path)?,
                None => GenerationConfig::default(),
            };
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            if let Some(n) = count {
                cfg.target_image_count = n;
            }
            cfg.png_sidecar |= png;
            let (manifest, report) = pipeline::generate(&cfg, &out, exec)?;
            if !quiet {
                let labels: usize = manifest
                    .entries
                    .iter()
                    .map(|e| e.annotation.labels.len())
                    .sum();
                println!(
                    "generated {} images ({} labels) from {} scenes into {}",
                    manifest.len(),
                    labels,
                    cfg.scene_count(),
                    out.display()
                );
            }
            fail_on(&report.failures, |(id, msg)| format!("{id}: {msg}"))
        }
        Command::ImportReal { root, format, out } => {
            let root = root
                .canonicalize()
                .with_context(|| format!("{}", root.display()))?;
            let (manifest, report) = import_real(&root, format.into())?;
            create_parent(&out)?;
            manifest.with_resolved_paths().save(&out)?;
            if !quiet {
                println!(
                    "imported {} images from {}",
                    report.imported,
                    root.display()
                );
            }
            for s in &report.skipped {
                eprintln!("skipped {}: {}", s.path.display(), s.reason);
            }
            Ok(())
        }
        Command::Mix {
            real,
            sim,
            preset,
            seed,
            repetitions,
            independent_test,
            export: export_args,
            out,
        } => {
            let real = DatasetManifest::load(&real)?;
            let sim = DatasetManifest::load(&sim)?;
            let spec = MixSpec {
                preset,
                seed,
                independent_test,
            };
            let splits = mix(&real, &sim, &spec, &SplitSpec { repetitions, seed })?;
            let opts = export_args.options(exec);
            let c = preset.counts();
            println!("| Preset | Real train | Sim train | Train | Real test |");
            println!("|---|---|---|---|---|");
            println!(
                "| {} | {} | {} | {} | {} |",
                preset.label(),
                c.real_train,
                c.sim_train,
                c.train(),
                c.real_test
            );
            let mut failures = Vec::new();
            for split in &splits {
                let rep = out.join(format!("rep{}", split.repetition));
                for (role, m) in [("train", &split.train), ("test", &split.test)] {
                    let report = export(m, &opts, &rep.join(role))?;
                    failures.extend(report.failures);
                }
            }
            if !quiet {
                println!("wrote {} repetitions to {}", splits.len(), out.display());
            }
            fail_on(&failures, |(p, msg)| format!("{}: {msg}", p.display()))
        }
        Command::Export {
            manifest,
            export: export_args,
            out,
        } => {
            let m = DatasetManifest::load(&manifest)?;
            let report = export(&m, &export_args.options(exec), &out)?;
            if !quiet {
                println!(
                    "exported {} images, {} labels ({} dropped) to {}",
                    report.images_written,
                    report.labels_written,
                    report.labels_dropped,
                    out.display()
                );
            }
            fail_on(&report.failures, |(p, msg)| {
                format!("{}: {msg}", p.display())
            })
        }
        Command::Evaluate {
            predictions,
            gt,
            iou_thresh,
            conf_thresh,
            ap_mode,
            per_class,
            label,
            out,
        } => {
            if gt.len() != 1 && gt.len() != predictions.len() {
                bail!(
                    "expected one --gt or one per --predictions, got {} and {}",
                    gt.len(),
                    predictions.len()
                );
            }
            let config = EvalConfig {
                iou_threshold: iou_thresh,
                conf_threshold: conf_thresh,
                ap_mode: match ap_mode {
                    ApModeArg::PrAuc => ApMode::PrAuc,
                    ApModeArg::ThresholdMean => ApMode::ThresholdMean,
                },
                class_mode: if per_class {
                    ClassMode::PerClass
                } else {
                    ClassMode::Agnostic
                },
            };
            let mut runs = Vec::new();
            for (i, pred_path) in predictions.iter().enumerate() {
                let gt_path = &gt[if gt.len() == 1 { 0 } else { i }];
                let manifest = DatasetManifest::load(gt_path)?;
                let dets = load_predictions(pred_path, &manifest)?;
                let report = evaluate(&dets, &manifest, &config)
                    .with_context(|| format!("evaluating {}", pred_path.display()))?;
                if !quiet {
                    println!(
                        "{}: TP={} FP={} FN={} P={:.4} R={:.4} F1={:.4} AP={:.4}",
                        pred_path.display(),
                        report.counts.tp,
                        report.counts.fp,
                        report.counts.fn_,
                        report.precision,
                        report.recall,
                        report.f1,
                        report.average_precision
                    );
                }
                runs.push(report);
            }
            let mean = MeanMetrics::of(&runs).expect("at least one run");
            print!("{}", report_table(&[(label.clone(), mean)]));
            if let Some(path) = out {
                create_parent(&path)?;
                let record = EvalRecord { label, mean, runs };
                std::fs::write(&path, serde_json::to_string_pretty(&record)?)
                    .with_context(|| format!("{}", path.display()))?;
            }
            Ok(())
        }
        Command::Report { files, reference } => {
            let rows: Vec<(String, MeanMetrics)> = if reference {
                REFERENCE_ROWS
                    .iter()
                    .map(|&(l, f1, ap)| (l.to_string(), MeanMetrics::from_f1_ap(f1, ap)))
                    .collect()
            } else {
                if files.is_empty() {
                    bail!("no evaluation files given");
                }
                files
                    .iter()
                    .map(|p| {
                        let text = std::fs::read_to_string(p)
                            .with_context(|| format!("{}", p.display()))?;
                        let r: EvalRecord = serde_json::from_str(&text)
                            .with_context(|| format!("{}", p.display()))?;
                        Ok((r.label, r.mean))
                    })
                    .collect::<anyhow::Result<_>>()?
            };
            print!("{}", report_table(&rows));
            Ok(())
        }
    }
}

fn create_parent(path: &Path) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("{}", dir.display()))?;
    }
    Ok(())
}

fn fail_on<T>(failures: &[T], describe: impl Fn(&T) -> String) -> anyhow::Result<()> {
    for f in failures {
        eprintln!("failed {}", describe(f));
    }
    if failures.is_empty() {
        Ok(())
    } else {
        bail!("{} file(s) failed", failures.len())
    }
}

/// The error chain, skipping causes whose text the outer message already
/// includes.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !out.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}
