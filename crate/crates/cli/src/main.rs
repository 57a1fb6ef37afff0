use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lietab_core::export::{read_document, Document};
use lietab_core::model::{ingest_str, Model};
use lietab_core::pipeline::{run_pipeline, Plan};
use lietab_core::table::inner_product;
use lietab_core::verify::{verify, VerifyOptions};
use lietab_core::Error;

#[derive(Parser)]
#[command(
    name = "lietab",
    version,
    about = "Generic character-table fragments for groups of Lie type"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a table file.
    Validate { file: PathBuf },
    /// Execute a plan stored in the table file, or read from a plan file.
    Run {
        file: PathBuf,
        #[arg(long)]
        plan: String,
        /// Write the artifacts here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run every consistency check, specialising at the listed q.
    Verify {
        file: PathBuf,
        /// For example `q=2,4,8`.
        #[arg(long)]
        at: Option<String>,
    },
    /// Render a table or artifacts file; `-` writes to standard output.
    Export {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        input: PathBuf,
        out: PathBuf,
    },
    /// Inner product of two characters of the same group.
    Inner {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, value_enum, default_value = "all")]
        support: Support,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Support {
    All,
    Unipotent,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    if path == Path::new("-") {
        print!("{text}");
        return Ok(());
    }
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load(path: &Path) -> Result<Model, Error> {
    ingest_str(&read(path)?)
}

fn parse_at(spec: &str) -> Result<Vec<i64>, Error> {
    let list = spec.strip_prefix("q=").unwrap_or(spec);
    list.split(',')
        .map(|s| {
            s.trim().parse::<i64>().map_err(|_| Error::Parse {
                position: 0,
                message: format!("bad value {s:?} in --at"),
                context: spec.to_string(),
            })
        })
        .collect()
}

fn find_plan(model: &Model, name: &str) -> Result<Plan, Error> {
    if let Some(p) = model.plan(name) {
        return Ok(p.clone());
    }
    let path = Path::new(name);
    if path.is_file() {
        let text = read(path)?;
        return serde_json::from_str(&text).map_err(|e| Error::Format {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        });
    }
    Err(Error::MissingData(format!("no plan named {name}")))
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Validate { file } => {
            let m = load(&file)?;
            println!(
                "ok: {} groups, {} characters, {} registries, {} Green tables, {} split classes",
                m.groups.len(),
                m.characters.len(),
                m.registries.len(),
                m.green_tables.len(),
                m.split_data.len()
            );
        }
        Command::Run {
            file,
            plan,
            out,
            format,
        } => {
            let model = load(&file)?;
            let plan = find_plan(&model, &plan)?;
            let doc = Document::Artifacts(run_pipeline(&model, &plan)?);
            let text = match format {
                Format::Json => doc.to_json(),
                Format::Text => doc.to_text(),
            };
            write(out.as_deref().unwrap_or(Path::new("-")), &text)?;
        }
        Command::Verify { file, at } => {
            let model = load(&file)?;
            let opts = VerifyOptions {
                at: at.as_deref().map(parse_at).transpose()?.unwrap_or_default(),
            };
            let rep = verify(&model, &opts);
            print!("{rep}");
            if rep.checks.is_empty() {
                println!("nothing to check");
            }
            if !rep.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Export { format, input, out } => {
            let doc = read_document(&read(&input)?)?;
            let text = match format {
                Format::Json => doc.to_json(),
                Format::Text => doc.to_text(),
            };
            write(&out, &text)?;
        }
        Command::Inner {
            file,
            left,
            right,
            group,
            support,
        } => {
            let model = load(&file)?;
            let group = match group {
                Some(g) => g,
                None => model
                    .groups
                    .iter()
                    .find(|g| {
                        model.character(&g.name, &left).is_ok()
                            && model.character(&g.name, &right).is_ok()
                    })
                    .map(|g| g.name.clone())
                    .ok_or_else(|| {
                        Error::MissingData(format!("no group has both {left} and {right}"))
                    })?,
            };
            let g = model.group(&group)?;
            let a = &model.character(&group, &left)?.function;
            let b = &model.character(&group, &right)?.function;
            let classes = match support {
                Support::All => None,
                Support::Unipotent => Some(g.unipotent_classes()),
            };
            let ip = inner_product(g, a, b, classes.as_deref())?;
            let note = if ip.partial { "  (partial sum)" } else { "" };
            println!("<{left}, {right}>_{group} = {}{note}", ip.value);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_class() as u8)
        }
    }
}
