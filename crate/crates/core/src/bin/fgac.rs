use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fgac::baselines::{KfrnnModel, KnnModel};
use fgac::classifier::{self, explain, FitConfig, Formulation, OwaPredictionConfig};
use fgac::connectives::{Isomorphism, OwaScheme, TripletSpec};
use fgac::harness::approx::{approx_study, write_csv};
use fgac::harness::{
    cross_validate, load_csv, nested_cross_validate, Dataset, EvalConfig, ModelDocument, ModelFamily,
    Preprocessor, StoredModel,
};
use fgac::relations::{NominalCount, SimilarityKind};
use fgac::solver::Loss;
use fgac::{Error, Result};

#[derive(Parser)]
#[command(name = "fgac", version, about = "Fuzzy granular approximation classifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a model on a labelled CSV file and save it.
    Fit(FitArgs),
    /// Predict every row of a CSV file with a saved model.
    Predict(PredictArgs),
    /// Arguments for and against one row's membership in a class.
    Explain(ExplainArgs),
    /// Cross-validated balanced accuracy with grid search.
    Evaluate(EvaluateArgs),
    /// Accuracy and time of the reduced constraint sets against nn = 1.
    ApproxStudy(ApproxArgs),
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    data: PathBuf,
    /// Class column.
    #[arg(long, default_value = "class")]
    target: String,
    /// Columns to treat as nominal even if they parse as numbers.
    #[arg(long, value_delimiter = ',')]
    nominal: Vec<String>,
}

impl DataArgs {
    fn load(&self) -> Result<Dataset> {
        let d = load_csv(&self.data, Some(&self.target), &self.nominal)?;
        log::info!("{}: {} rows, {} classes", d.name, d.len(), d.n_classes());
        Ok(d)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Fgac,
    Knn,
    Kfrnn,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value = "mse")]
    loss: Loss,
    #[arg(long, default_value = "euclidean")]
    similarity: SimilarityKind,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Fraction of nearest neighbours that receive constraints.
    #[arg(long, default_value_t = 1.0)]
    nn: f64,
    #[arg(long, default_value = "multiclass")]
    formulation: Formulation,
    /// `identity` or `power:<c>`.
    #[arg(long, default_value = "identity")]
    isomorphism: Isomorphism,
    /// Count nominal attributes once instead of per category.
    #[arg(long)]
    nominal_once: bool,
}

impl ModelArgs {
    fn fit_config(&self) -> FitConfig {
        FitConfig {
            triplet: TripletSpec::with_isomorphism(self.isomorphism),
            gamma: self.gamma,
            similarity: self.similarity,
            nominal_count: self.nominal_count(),
            loss: self.loss,
            nn: self.nn,
            formulation: self.formulation,
        }
    }

    fn nominal_count(&self) -> NominalCount {
        if self.nominal_once {
            NominalCount::Original
        } else {
            NominalCount::OneHot
        }
    }
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value = "fgac")]
    family: Family,
    /// Neighbour count for knn.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// OWA bounds for fgac, or the weights of kfrnn: `scheme[:k]`.
    #[arg(long)]
    owa: Option<OwaPredictionConfig>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExplainArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Zero-based row of the data file (after dropping incomplete rows).
    #[arg(long)]
    row: usize,
    /// Class name or id; the predicted class when absent.
    #[arg(long)]
    class: Option<String>,
    #[arg(long, default_value_t = 5)]
    top: usize,
    /// Also write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value = "fgac")]
    model_family: Family,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// OWA bounds for fgac or the weight scheme of kfrnn: `scheme[:k]`.
    #[arg(long)]
    owa: Option<OwaPredictionConfig>,
    /// Score the tuned model on outer folds.
    #[arg(long)]
    nested: bool,
    /// Skip minority oversampling of the training folds.
    #[arg(long)]
    no_oversample: bool,
    /// Write the full report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_delimiter = ',', default_value = "0.02,0.05,0.1,0.2,0.5,1")]
    nn: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    gamma: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "mse")]
    loss: Vec<Loss>,
    #[arg(long, value_delimiter = ',', default_value = "euclidean")]
    similarity: Vec<SimilarityKind>,
    /// Timing repetitions; the minimum is kept.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn io_err(source: io::Error) -> Error {
    Error::Io {
        path: "<stdout>".into(),
        source,
    }
}

fn warn_owa_duality(isomorphism: &Isomorphism, owa: Option<&OwaPredictionConfig>) {
    if owa.is_some() && !isomorphism.is_identity() {
        log::warn!("non-standard negator: OWA duality checks are skipped");
    }
}

fn fit(args: &FitArgs) -> Result<()> {
    let dataset = args.data.load()?;
    let rows: Vec<usize> = (0..dataset.len()).collect();
    let pre = Preprocessor::fit(&dataset, &rows)?;
    let table = pre.transform(&dataset, &rows)?;
    let labels = &dataset.classes;
    let model = match args.family {
        Family::Fgac => {
            warn_owa_duality(&args.model.isomorphism, args.owa.as_ref());
            let model = classifier::fit(&table, labels, &args.model.fit_config())?;
            let s = &model.solver_stats;
            log::info!(
                "solved in {:.3}s, {} iterations, duality gap {:.2e}",
                s.wall_time_secs,
                s.iterations,
                s.duality_gap
            );
            StoredModel::Fgac { model, owa: args.owa }
        }
        Family::Knn => StoredModel::Knn {
            model: KnnModel::fit(
                &table,
                labels,
                args.k,
                args.model.similarity,
                args.model.nominal_count(),
            )?,
        },
        Family::Kfrnn => {
            let owa = args
                .owa
                .unwrap_or(OwaPredictionConfig::new(OwaScheme::Additive, None));
            StoredModel::Kfrnn {
                model: KfrnnModel::with_defaults(&table, labels, owa.scheme, owa.upper_truncation)?,
            }
        }
    };
    let doc = ModelDocument::new(
        Some(args.data.target.clone()),
        dataset.class_names.clone(),
        pre,
        model,
    );
    doc.save(&args.out)?;
    println!("saved model to {}", args.out.display());
    Ok(())
}

fn predict(args: &PredictArgs) -> Result<()> {
    let doc = ModelDocument::load(&args.model)?;
    let dataset = load_csv(&args.data, None, &doc.preprocessing.nominal_names())?;
    let predictions = doc.predict(&dataset)?;
    let mut w = csv::Writer::from_writer(output(args.out.as_deref())?);
    let mut header = vec!["id".to_string()];
    header.extend(doc.class_names.iter().map(|c| format!("degree_{c}")));
    header.push("decision".into());
    w.write_record(&header)?;
    for (i, p) in predictions.iter().enumerate() {
        let mut record = vec![i.to_string()];
        record.extend(p.degrees.iter().map(f64::to_string));
        record.push(doc.class_names[p.class].clone());
        w.write_record(&record)?;
    }
    w.flush().map_err(io_err)
}

fn explain_row(args: &ExplainArgs) -> Result<()> {
    let doc = ModelDocument::load(&args.model)?;
    let StoredModel::Fgac { model, .. } = &doc.model else {
        return Err(Error::InvalidParameter("explanations need an fgac model".into()));
    };
    let dataset = load_csv(&args.data, None, &doc.preprocessing.nominal_names())?;
    if args.row >= dataset.len() {
        return Err(Error::IndexOutOfRange {
            index: args.row,
            len: dataset.len(),
        });
    }
    let query = doc.transform(&dataset, &[args.row])?;
    let relation = model.query_relation(&query)?;
    let row = relation.row(0);
    let class = match &args.class {
        Some(c) => match doc.class_names.iter().position(|n| n == c) {
            Some(k) => k,
            None => c
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("unknown class `{c}`")))?,
        },
        None => model.predict_class(row, row, None)?.class,
    };
    let mut report = explain(model, args.row, row, row, class, args.top)?;
    report.notes.push(format!(
        "classes: {}",
        doc.class_names
            .iter()
            .enumerate()
            .map(|(k, n)| format!("{k}={n}"))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    print!("{report}");
    if let Some(path) = &args.json {
        serde_json::to_writer_pretty(create(path)?, &report)?;
    }
    Ok(())
}

fn evaluate(args: &EvaluateArgs) -> Result<()> {
    let dataset = args.data.load()?;
    let family = match args.model_family {
        Family::Fgac => {
            warn_owa_duality(&args.model.isomorphism, args.owa.as_ref());
            ModelFamily::Fgac {
                config: args.model.fit_config(),
                owa: args.owa,
            }
        }
        Family::Knn => ModelFamily::Knn {
            kind: args.model.similarity,
            nominal_count: args.model.nominal_count(),
        },
        Family::Kfrnn => ModelFamily::Kfrnn {
            scheme: args.owa.map_or(OwaScheme::Additive, |o| o.scheme),
        },
    };
    let config = EvalConfig {
        folds: args.folds,
        seed: args.seed,
        oversample: !args.no_oversample,
        grid: Vec::new(),
    };
    let json = if args.nested {
        let r = nested_cross_validate(&dataset, &family, &config)?;
        for (score, hyper) in r.outer_scores.iter().zip(&r.chosen) {
            println!("outer fold: {score:.4} ({hyper})");
        }
        println!(
            "{} {}: nested balanced accuracy {:.4}",
            r.dataset, r.family, r.mean
        );
        serde_json::to_string_pretty(&r)?
    } else {
        let r = cross_validate(&dataset, &family, &config)?;
        for c in &r.candidates {
            println!(
                "{:<12} {:.4}  ({:.2}s)",
                c.hyper.to_string(),
                c.mean,
                c.wall_time_secs
            );
        }
        let best = r.best_candidate();
        println!(
            "{} {}: balanced accuracy {:.4} at {} over {} folds",
            r.dataset, r.family, best.mean, best.hyper, r.folds
        );
        serde_json::to_string_pretty(&r)?
    };
    if let Some(path) = &args.report {
        create(path)?
            .write_all(json.as_bytes())
            .map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
    }
    Ok(())
}

fn approx(args: &ApproxArgs) -> Result<()> {
    let dataset = args.data.load()?;
    let rows = approx_study(
        &dataset,
        &args.gamma,
        &args.nn,
        &args.loss,
        &args.similarity,
        &FitConfig::default(),
        args.repeats,
    )?;
    write_csv(&rows, output(args.out.as_deref())?)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Fit(a) => fit(a),
        Command::Predict(a) => predict(a),
        Command::Explain(a) => explain_row(a),
        Command::Evaluate(a) => evaluate(a),
        Command::ApproxStudy(a) => approx(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
