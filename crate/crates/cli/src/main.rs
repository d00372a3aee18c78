use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use hcns_core::algebra::{validate, viz_hns};
use hcns_core::eval::{eval, Value};
use hcns_core::hcnumber::viz_in_a;
use hcns_core::registry::{default_path, describe, LIB_ENV};
use hcns_core::rotation::{self, example, RotationSpec, Vec3};
use hcns_core::transforms::{dir_sum_n, export_iso_system, gen_iso, multi_dim, sys_izo, trans, BasisTransform, ProductMode};
use hcns_core::{AlgebraDef, Error, HNumber, Registry, Scalar};

#[derive(Parser)]
#[command(name = "hcns", version, about = "Hypercomplex number systems calculator")]
struct Cli {
    /// Algebra library directory.
    #[arg(long, global = true, env = LIB_ENV)]
    lib: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Both)]
    output: Output,
    /// Significant digits for floating-point values.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u8).range(1..=17))]
    precision: u8,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Natural,
    List,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Comm,
    Noncomm,
}

#[derive(Subcommand)]
enum Cmd {
    /// List every algebra with its Cayley table.
    List,
    /// Show one algebra.
    Show {
        name: String,
        #[arg(long, default_value = "e")]
        basis: String,
    },
    /// Evaluate an expression, e.g. "(e1 + 2*e2)*conj(e3)".
    Eval { alg: String, expr: String },
    /// Rotate a point by one or two axis-angle rotations (angles in degrees).
    /// Without arguments runs the (1,2,3) example.
    Rotate {
        #[arg(long, value_parser = vec3)]
        point: Option<Vec3>,
        #[arg(long, value_parser = vec3)]
        axis1: Option<Vec3>,
        #[arg(long)]
        angle1: Option<f64>,
        #[arg(long, value_parser = vec3)]
        axis2: Option<Vec3>,
        #[arg(long)]
        angle2: Option<f64>,
    },
    /// Direct sum of two or more algebras, stored as the last name.
    Dirsum {
        #[arg(num_args = 3.., required = true)]
        names: Vec<String>,
    },
    /// Doubling of NAME by itself (or by --by).
    Double {
        name: String,
        mode: Mode,
        out: String,
        #[arg(long)]
        by: Option<String>,
    },
    /// Swap basis elements S and T (1-based).
    Trans { name: String, s: usize, t: usize, out: String },
    /// Change of basis; the file holds one comma-separated row per line.
    Geniso { name: String, matrix: PathBuf, out: String },
    /// Export the isomorphism equations between two algebras.
    Isosys { source: String, target: String, file: PathBuf },
    /// Delete a custom algebra.
    Remove { name: String },
}

fn vec3(s: &str) -> Result<Vec3, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected three comma-separated numbers".to_string())
}

struct Printer {
    output: Output,
    precision: usize,
}

impl Printer {
    fn round(&self, x: f64) -> f64 {
        format!("{:.*e}", self.precision - 1, x).parse().unwrap_or(x)
    }

    fn scalar(&self, s: &Scalar) -> Scalar {
        match s {
            Scalar::Float(x) => Scalar::Float(self.round(*x)),
            s => s.clone(),
        }
    }

    fn number(&self, h: &HNumber, basis: &str) -> anyhow::Result<()> {
        let h = h.map(|c| Ok(self.scalar(c)))?;
        if matches!(self.output, Output::List | Output::Both) {
            println!("{h}");
        }
        if matches!(self.output, Output::Natural | Output::Both) {
            println!("{}", viz_in_a(&h, basis)?);
        }
        Ok(())
    }

    fn vector(&self, v: &Vec3) -> String {
        let parts: Vec<String> = v.iter().map(|x| format!("{:?}", self.round(*x))).collect();
        format!("({})", parts.join(", "))
    }
}

fn open_registry(lib: Option<PathBuf>) -> anyhow::Result<Registry> {
    Ok(match lib.or_else(default_path) {
        Some(dir) => Registry::open(dir)?,
        None => Registry::in_memory(),
    })
}

fn show(def: &AlgebraDef, basis: &str) -> anyhow::Result<()> {
    println!("{}", describe(def));
    if !def.kind().is_empty() {
        println!("kind: {}", def.kind());
    }
    println!("{}", viz_hns(def, basis)?);
    let v = validate(def);
    let yn = |b: Option<bool>| b.map_or("?", |b| if b { "yes" } else { "no" });
    println!(
        "unit e1: {}  commutative: {}  associative: {}",
        yn(v.first_basis_identity()),
        yn(v.commutative()),
        yn(v.associative())
    );
    Ok(())
}

fn store(reg: &mut Registry, def: AlgebraDef) -> anyhow::Result<()> {
    let name = def.name().to_string();
    let (comment, kind) = (def.comment().to_string(), def.kind().to_string());
    reg.add_hns(&name, def, &comment, &kind)?;
    match reg.storage_path() {
        Some(p) => println!("stored {name} in {}", p.display()),
        None => println!("no library directory; {name} was not stored"),
    }
    show(reg.search_hns(&name)?, "e")
}

fn read_matrix(path: &Path) -> anyhow::Result<Vec<Vec<Scalar>>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line.split(',').map(|c| c.trim().parse::<Scalar>()).collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn rotate(p: &Printer, point: Option<Vec3>, a1: Option<Vec3>, t1: Option<f64>, a2: Option<Vec3>, t2: Option<f64>) -> anyhow::Result<()> {
    let demo = point.is_none() && a1.is_none() && t1.is_none() && a2.is_none() && t2.is_none();
    let point = point.unwrap_or(example::POINT);
    let first = RotationSpec::new(a1.unwrap_or(example::AXIS1), t1.map_or(example::ANGLE1, f64::to_radians))?;
    let second = if demo {
        Some(RotationSpec::new(example::AXIS2, example::ANGLE2)?)
    } else if a2.is_some() || t2.is_some() {
        Some(RotationSpec::new(a2.unwrap_or(example::AXIS2), t2.unwrap_or(0.0).to_radians())?)
    } else {
        None
    };
    let q = rotation::quat_from_rotation(&first);
    let (via_q, via_m) = match &second {
        Some(s) => {
            let m = rotation::rotation_matrix_oracle(s) * rotation::rotation_matrix_oracle(&first);
            (rotation::rotate2(&point, &q, &rotation::quat_from_rotation(s))?, rotation::apply(&m, &point))
        }
        None => (rotation::rotate(&point, &q)?, rotation::apply(&rotation::rotation_matrix_oracle(&first), &point)),
    };
    let dev = via_q.iter().zip(&via_m).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("quaternion: {}", p.vector(&via_q));
    println!("matrix:     {}", p.vector(&via_m));
    println!("max deviation: {dev:e}");
    if demo {
        let quoted = example::quoted();
        println!(
            "note: the value {} often quoted for this example has squared length {}, \
             while rotations keep the squared length {} of the input",
            p.vector(&quoted),
            p.round(rotation::norm(&quoted).powi(2)),
            p.round(rotation::norm(&point).powi(2)),
        );
        println!("note: the second axis is assumed to be (1, 0, 0); pass --axis2 to change it");
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let p = Printer {
        output: cli.output,
        precision: cli.precision as usize,
    };
    if let Cmd::Rotate { point, axis1, angle1, axis2, angle2 } = cli.cmd {
        return rotate(&p, point, axis1, angle1, axis2, angle2);
    }
    let mut reg = open_registry(cli.lib)?;
    match cli.cmd {
        Cmd::List => print!("{}", reg.viz_lib_hns()),
        Cmd::Show { name, basis } => show(reg.search_hns(&name)?, &basis)?,
        Cmd::Eval { alg, expr } => {
            let r = eval(&expr, reg.search_hns(&alg)?)?;
            match &r.value {
                Value::Scalar(s) => println!("{}", p.scalar(s)),
                Value::Number(h) => p.number(h, &r.basis)?,
            }
        }
        Cmd::Dirsum { mut names } => {
            let out = names.pop().expect("at least three names");
            let algs = names.iter().map(|n| reg.search_hns(n).cloned()).collect::<Result<Vec<_>, _>>()?;
            let def = dir_sum_n(&algs, &out)?;
            store(&mut reg, def)?;
        }
        Cmd::Double { name, mode, out, by } => {
            let a = reg.search_hns(&name)?.clone();
            let b = match by {
                Some(b) => reg.search_hns(&b)?.clone(),
                None => a.clone(),
            };
            let mode = match mode {
                Mode::Comm => ProductMode::Commutative,
                Mode::Noncomm => ProductMode::NonCommutative,
            };
            store(&mut reg, multi_dim(&a, &b, mode, &out)?)?;
        }
        Cmd::Trans { name, s, t, out } => {
            let def = trans(reg.search_hns(&name)?, s, t)?.renamed(&out)?;
            store(&mut reg, def)?;
        }
        Cmd::Geniso { name, matrix, out } => {
            let l = BasisTransform::new(read_matrix(&matrix)?)?;
            let def = gen_iso(&l, reg.search_hns(&name)?, &out)?;
            store(&mut reg, def)?;
        }
        Cmd::Isosys { source, target, file } => {
            let sys = sys_izo(reg.search_hns(&source)?, reg.search_hns(&target)?)?;
            fs::write(&file, export_iso_system(&sys)).with_context(|| format!("writing {}", file.display()))?;
            println!("{} equations written to {}", sys.equations.len(), file.display());
        }
        Cmd::Remove { name } => {
            reg.refill_hns(&name)?;
            println!("removed {name}");
        }
        Cmd::Rotate { .. } => unreachable!(),
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(e) = e.downcast_ref::<Error>() {
        return match e {
            Error::NotFound { .. } => 2,
            Error::Parse { .. }
            | Error::InvalidSymbol(_)
            | Error::MixedBasis(..)
            | Error::BasisMismatch { .. }
            | Error::Malformed(_) => 3,
            Error::Io(_) | Error::CorruptFile { .. } => 5,
            _ => 4,
        };
    }
    if e.downcast_ref::<std::io::Error>().is_some() {
        return 5;
    }
    1
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = e.downcast_ref::<Error>().map_or("Io", Error::name);
            eprintln!("error [{kind}]: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
