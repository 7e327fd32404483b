use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liechannel::builder::blend::prepare_blend;
use liechannel::builder::generators::{
    make_dupin_torus, make_reflection_example, random_cone, random_cylinder, random_revolution,
};
use liechannel::builder::sphere_curve::channel_from_sphere_curve;
use liechannel::channel::certify;
use liechannel::curvature::vessiot_classify;
use liechannel::io;
use liechannel::{ContactElement, Error, Label, LegendreNet, LieVec, Tolerances, Vec3};

mod report;

#[derive(Parser)]
#[command(
    name = "liechannel",
    version,
    about = "Discrete channel surfaces in Lie sphere geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a reference net.
    Generate(GenerateArgs),
    /// Check the Legendre and channel conditions of a net.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "both", value_parser = parse_direction, allow_hyphen_values = true)]
        direction: Direction,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the Vessiot class of a channel net.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Face and edge curvatures of a net.
    Curvature {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Channel net enveloped by a sphere curve.
    Build {
        #[arg(long)]
        spheres: PathBuf,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phase: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Channel net through a Ribaucour pair of curves.
    Blend {
        #[arg(long)]
        c1: PathBuf,
        #[arg(long)]
        c2: PathBuf,
        /// Unit normal at the first point of the first curve, `nx,ny,nz`.
        #[arg(long, allow_hyphen_values = true)]
        contact: String,
        /// Face-cyclide parameter on the first quadrilateral.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "through_infinity")]
        t0: Option<f64>,
        /// Pick the face cyclide through the point at infinity.
        #[arg(long)]
        through_infinity: bool,
        /// Samples per circle besides the two curve points.
        #[arg(long, default_value_t = 6)]
        extra: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Wavefront OBJ of a net.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        obj: PathBuf,
        /// Add the generating circles as polylines.
        #[arg(long)]
        circles: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Revolution,
    Cylinder,
    Cone,
    DupinTorus,
    Example1,
    Example2,
    Example3,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 8)]
    m: usize,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long = "R", default_value_t = 2.0)]
    big: f64,
    #[arg(long = "r", default_value_t = 1.0)]
    small: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    One(Label),
    Both,
}

impl Direction {
    fn labels(self) -> Vec<Label> {
        match self {
            Direction::One(l) => vec![l],
            Direction::Both => vec![Label::Plus, Label::Minus],
        }
    }
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    if s == "both" {
        return Ok(Direction::Both);
    }
    s.parse::<Label>()
        .map(Direction::One)
        .map_err(|_| format!("expected +, - or both, got `{s}`"))
}

/// Exit status 2 for bad input, 1 for everything the geometry rejects.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Malformed(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::InvalidParameter(_)
            | Error::InvalidComplex(_)
            | Error::InvalidTolerance(_)
            | Error::NonUnitNormal(_)
            | Error::NotLegendre { .. }
            | Error::InvalidContactElement(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let tol = Tolerances::from_env()?;
    match cli.command {
        Command::Generate(args) => generate(&args, &tol),
        Command::Verify {
            input,
            direction,
            report,
        } => {
            let net = io::load_net(&input, &tol)?;
            let (value, code) = report::verify(&net, direction, &tol);
            emit(report.as_deref(), &value)?;
            Ok(code)
        }
        Command::Classify { input } => {
            let net = io::load_net(&input, &tol)?;
            let cert = [Label::Plus, Label::Minus]
                .into_iter()
                .find_map(|d| certify(&net, d, &tol).ok())
                .ok_or_else(|| Failure {
                    code: 1,
                    message: "not a channel net".into(),
                })?;
            let class = vessiot_classify(&cert, &tol)?;
            println!("{}", class.kind);
            Ok(0)
        }
        Command::Curvature { input, report } => {
            let net = io::load_net(&input, &tol)?;
            let value = report::curvature(&net, &tol)?;
            emit(report.as_deref(), &value)?;
            Ok(0)
        }
        Command::Build {
            spheres,
            samples,
            phase,
            out,
        } => {
            let curve = io::load_sphere_curve(&spheres, &tol)?;
            let built = channel_from_sphere_curve(&curve, samples, phase, &tol)?;
            io::save_net(&out, &built.net)?;
            Ok(0)
        }
        Command::Blend {
            c1,
            c2,
            contact,
            t0,
            through_infinity,
            extra,
            out,
        } => {
            let c1 = io::load_curve(&c1)?;
            let c2 = io::load_curve(&c2)?;
            let normal = parse_vec3(&contact)?;
            let start = c1
                .vertices()
                .first()
                .copied()
                .ok_or_else(|| usage("empty curve"))?;
            let f0 = ContactElement::from_point_normal(&start, &normal)?;
            let setup = prepare_blend(&c1, &c2, &f0, &tol)?;
            let t = if through_infinity {
                setup
                    .family
                    .parameter_containing(&LieVec::einf(), &tol)
                    .map(|(t, _)| t)
                    .ok_or_else(|| Failure {
                        code: 1,
                        message: "no face cyclide passes through infinity".into(),
                    })?
            } else {
                t0.unwrap_or(0.0)
            };
            let built = setup.build(t, extra, &tol)?;
            io::save_net(&out, &built.net)?;
            Ok(0)
        }
        Command::Export {
            input,
            obj,
            circles,
        } => {
            let net = io::load_net(&input, &tol)?;
            let cert = if circles {
                Some(
                    [Label::Plus, Label::Minus]
                        .into_iter()
                        .find_map(|d| certify(&net, d, &tol).ok())
                        .ok_or_else(|| Failure {
                            code: 1,
                            message: "circles need a channel net".into(),
                        })?,
                )
            } else {
                None
            };
            let text = io::to_obj(&net, cert.as_ref(), &tol)?;
            std::fs::write(&obj, text).map_err(Error::from)?;
            Ok(0)
        }
    }
}

fn parse_vec3(s: &str) -> Result<Vec3, Failure> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| usage(format!("bad vector `{s}`: {e}")))?;
    match parts[..] {
        [x, y, z] => Ok(Vec3::new(x, y, z)),
        _ => Err(usage(format!("expected three components, got `{s}`"))),
    }
}

fn emit(path: Option<&Path>, value: &serde_json::Value) -> Result<(), Failure> {
    match path {
        Some(p) => io::write_json(p, value)?,
        None => println!(
            "{}",
            serde_json::to_string_pretty(value).map_err(Error::from)?
        ),
    }
    Ok(())
}

fn generate(args: &GenerateArgs, tol: &Tolerances) -> Result<u8, Failure> {
    let (m, n, seed) = (args.m, args.n, args.seed);
    let net: LegendreNet = match args.kind {
        Kind::Revolution => random_revolution(seed, m, n, tol)?,
        Kind::Cylinder => random_cylinder(seed, m, n, tol)?,
        Kind::Cone => random_cone(seed, m, n, tol)?,
        Kind::DupinTorus => make_dupin_torus(args.big, args.small, m, n, tol)?,
        Kind::Example1 => make_reflection_example(1, seed, m, n, tol)?,
        Kind::Example2 => make_reflection_example(2, seed, m, n, tol)?,
        Kind::Example3 => make_reflection_example(3, seed, m, n, tol)?,
    };
    match &args.out {
        Some(p) => io::save_net(p, &net)?,
        None => println!(
            "{}",
            serde_json::to_string_pretty(&io::NetFile::from_net(&net, false))
                .map_err(Error::from)?
        ),
    }
    Ok(0)
}
