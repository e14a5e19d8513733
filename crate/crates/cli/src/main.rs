//! Command-line interface: decide congruence, classify and construct
//! triangles, compose them, report local obstructions, and verify the
//! bundled worked-example fixtures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use theta_congruent::construct::{
    compose, search_type1, search_type2, search_type3, search_type4, Construction, SearchBudget,
};
use theta_congruent::correspondence::{classify, phi, psi, to_conic_point, validate, Triangle};
use theta_congruent::curves::{add, torsion_k, torsion_q, Angle, Curve};
use theta_congruent::decide::decide;
use theta_congruent::obstruct::obstruction_report;
use theta_congruent::quad::NumField;
use theta_congruent::surd::parse_elem;
use theta_congruent::{Error, Result};

const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_INVALID_TRIANGLE: u8 = 3;
const EXIT_FIXTURE_FAILURE: u8 = 4;

#[derive(Parser)]
#[command(name = "theta-congruent", version, about = "Exact arithmetic for theta-congruent numbers over real quadratic fields Q(sqrt(m))")]
struct Cli {
    /// Output format for results
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether n is (Q(sqrt(m)), theta)-congruent, with a triangle witness
    Decide {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        /// cos(theta) as a reduced fraction s/r with 0 < |s| < r
        #[arg(long, allow_hyphen_values = true)]
        cos: String,
        /// Search bounds: numerator,denominator,parameter
        #[arg(long, default_value = "10000,100,10000")]
        budget: String,
    },
    /// Classify a triangle into the four types (or rational / outside)
    Classify {
        /// The three sides, comma separated, e.g. "3,4,sqrt(13)"
        #[arg(long)]
        triangle: String,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        cos: String,
    },
    /// Search for a triangle of the given type
    Construct {
        /// Triangle type to search for: 1, 2, 3 or 4
        #[arg(long = "type")]
        triangle_type: u8,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        cos: String,
        #[arg(long, default_value = "10000,100,10000")]
        budget: String,
    },
    /// Compose a rational triangle of area n*alpha with one of area m*n*alpha
    Compose {
        /// First triangle (over Q, area n*alpha), e.g. "55/12,48/5,499/60"
        #[arg(long)]
        first: String,
        /// Second triangle (over Q, area m*n*alpha)
        #[arg(long)]
        second: String,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        cos: String,
    },
    /// Local solvability report for the type-2/3/4 conics
    Obstruct {
        #[arg(long)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        cos: String,
    },
    /// Torsion subgroup of E_{n,theta} over Q or over Q(sqrt(m))
    Torsion {
        #[arg(long)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        cos: String,
        #[arg(long)]
        m: Option<i64>,
    },
    /// Check the bundled (or a given) fixture file of recomputed examples
    Verify {
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

fn parse_cos(s: &str) -> Result<Angle> {
    let (num, den) = s
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("cos must be a fraction s/r, got {s:?}")))?;
    let s_val: i64 = num
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in cos {num:?}")))?;
    let r_val: i64 = den
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in cos {den:?}")))?;
    Angle::new(r_val, s_val)
}

fn parse_budget(s: &str) -> Result<SearchBudget> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse(format!("budget must be three integers, got {s:?}")))?;
    match parts[..] {
        [max_numerator, max_denominator, max_param]
            if max_numerator >= 0 && max_denominator >= 0 && max_param >= 0 =>
        {
            Ok(SearchBudget { max_numerator, max_denominator, max_param })
        }
        _ => Err(Error::Parse(format!("budget must be three nonnegative integers, got {s:?}"))),
    }
}

fn parse_triangle(sides: &str, n: i64, angle: Angle, field: NumField) -> Result<Triangle> {
    let parts: Vec<&str> = sides.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("triangle needs three sides, got {}", parts.len())));
    }
    let u = parse_elem(parts[0], field)?;
    let v = parse_elem(parts[1], field)?;
    let w = parse_elem(parts[2], field)?;
    validate(u, v, w, n, angle, field)
}

fn print_construction(found: Option<Construction>, output: Output) {
    match (found, output) {
        (Some(c), Output::Json) => {
            println!("{}", json!({ "found": true, "triangle": c.triangle, "provenance": c.provenance }));
        }
        (None, Output::Json) => println!("{}", json!({ "found": false })),
        (Some(c), Output::Text) => {
            println!("triangle: {}", c.triangle);
            println!("method: {}", c.provenance.method);
            if let Some([u, v]) = &c.provenance.base {
                println!("conic base point: ({u}, {v})");
            }
            if let Some(t) = &c.provenance.t {
                println!("parameter: t = {t}");
            }
            if let Some(p) = &c.provenance.point {
                println!("curve point: {p}");
            }
        }
        (None, Output::Text) => println!("no triangle found within the budget"),
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Decide { n, m, cos, budget } => {
            let angle = parse_cos(&cos)?;
            let budget = parse_budget(&budget)?;
            let decision = decide(n, m, angle, &budget)?;
            match cli.output {
                Output::Json => println!("{}", serde_json::to_string(&decision).expect("serializable")),
                Output::Text => {
                    match &decision.source {
                        Some(src) => println!("verdict: {:?} (source {src})", decision.verdict),
                        None => println!("verdict: {:?}", decision.verdict),
                    }
                    if let Some(w) = &decision.witness {
                        println!("triangle: {}", w.triangle);
                        println!("point: {} on {}", w.point, serde_json::to_string(&w.curve).expect("serializable"));
                    }
                    for note in &decision.notes {
                        println!("note: {note}");
                    }
                }
            }
        }
        Cmd::Classify { triangle, n, m, cos } => {
            let angle = parse_cos(&cos)?;
            let field = NumField::quad(m)?;
            let t = parse_triangle(&triangle, n, angle, field)?;
            let label = match classify(&t) {
                Ok(ty) => ty.to_string(),
                Err(Error::OutsideClassification) => "outside the four-type classification".to_string(),
                Err(e) => return Err(e),
            };
            match cli.output {
                Output::Json => {
                    let tag = match classify(&t) {
                        Ok(ty) => json!(ty.tag()),
                        Err(_) => json!(null),
                    };
                    println!("{}", json!({ "type": tag, "triangle": t }));
                }
                Output::Text => println!("{label}"),
            }
        }
        Cmd::Construct { triangle_type, n, m, cos, budget } => {
            let angle = parse_cos(&cos)?;
            let budget = parse_budget(&budget)?;
            let found = match triangle_type {
                1 => search_type1(n, angle, m, &budget)?,
                2 => search_type2(n, angle, m, &budget)?,
                3 => search_type3(n, angle, m, &budget)?,
                4 => search_type4(n, angle, m, &budget)?,
                other => {
                    return Err(Error::Parse(format!("triangle type must be 1-4, got {other}")))
                }
            };
            print_construction(found, cli.output);
        }
        Cmd::Compose { first, second, n, m, cos } => {
            let angle = parse_cos(&cos)?;
            let t1 = parse_triangle(&first, n, angle, NumField::Q)?;
            let t2 = parse_triangle(&second, m * n, angle, NumField::Q)?;
            let tri = compose(&t1, &t2, m)?;
            match cli.output {
                Output::Json => println!("{}", serde_json::to_string(&tri).expect("serializable")),
                Output::Text => println!("triangle: {tri}"),
            }
        }
        Cmd::Obstruct { m, cos } => {
            let angle = parse_cos(&cos)?;
            let report = obstruction_report(m, angle)?;
            match cli.output {
                Output::Json => println!("{}", serde_json::to_string(&report).expect("serializable")),
                Output::Text => {
                    for (name, t) in
                        [("type 2", &report.type2), ("type 3", &report.type3), ("type 4", &report.type4)]
                    {
                        if t.solvable {
                            println!("{name}: locally solvable everywhere");
                        } else {
                            let places: Vec<String> =
                                t.obstructed.iter().map(|p| p.to_string()).collect();
                            println!("{name}: obstructed at {}", places.join(", "));
                        }
                    }
                }
            }
        }
        Cmd::Torsion { n, cos, m } => {
            let angle = parse_cos(&cos)?;
            let (class, notes) = match m {
                None => (torsion_q(n, angle)?, Vec::new()),
                Some(m) => torsion_k(n, angle, m)?,
            };
            match cli.output {
                Output::Json => {
                    println!("{}", json!({ "shape": class.shape, "witnesses": class.witnesses, "notes": notes }));
                }
                Output::Text => {
                    println!("torsion: {}", class.shape);
                    for w in &class.witnesses {
                        println!("witness: {w}");
                    }
                    for note in &notes {
                        println!("note: {note}");
                    }
                }
            }
        }
        Cmd::Verify { fixtures } => {
            let data = match &fixtures {
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?,
                None => include_str!("../fixtures/examples.json").to_string(),
            };
            return verify_fixtures(&data);
        }
    }
    Ok(0)
}

#[derive(Deserialize)]
struct Fixture {
    kind: String,
    n: i64,
    r: i64,
    s: i64,
    #[serde(default)]
    m: Option<i64>,
    #[serde(default)]
    triangle: Option<[String; 3]>,
    #[serde(default)]
    point: Option<[String; 2]>,
    expected: serde_json::Value,
    #[serde(rename = "paperNote")]
    paper_note: String,
}

fn check_fixture(f: &Fixture) -> Result<()> {
    let angle = Angle::new(f.r, f.s)?;
    let field = match f.m {
        None => NumField::Q,
        Some(m) => NumField::quad(m)?,
    };
    let expect_elem = |key: &str| -> Result<theta_congruent::QuadElem> {
        let s = f.expected[key]
            .as_str()
            .ok_or_else(|| Error::Parse(format!("fixture expects a string at {key:?}")))?;
        parse_elem(s, field)
    };
    let triangle = || -> Result<Triangle> {
        let sides = f
            .triangle
            .as_ref()
            .ok_or_else(|| Error::Parse("fixture is missing a triangle".to_string()))?;
        validate(
            parse_elem(&sides[0], field)?,
            parse_elem(&sides[1], field)?,
            parse_elem(&sides[2], field)?,
            f.n,
            angle,
            field,
        )
    };
    match f.kind.as_str() {
        "double" => {
            let curve = Curve::new(f.n, angle, field)?;
            let coords = f
                .point
                .as_ref()
                .ok_or_else(|| Error::Parse("fixture is missing a point".to_string()))?;
            let p = curve.affine(parse_elem(&coords[0], field)?, parse_elem(&coords[1], field)?)?;
            let doubled = add(&curve, &p, &p)?;
            let (x, y) = doubled.xy().ok_or_else(|| Error::domain("2P is infinity"))?;
            if x != &expect_elem("x")? || y != &expect_elem("y")? {
                return Err(Error::domain(format!("2P = ({x}, {y}) differs from the expected point")));
            }
        }
        "phi" => {
            let t = triangle()?;
            let p = phi(&t);
            let (x, y) = p.xy().expect("phi is affine");
            if x != &expect_elem("x")? || y != &expect_elem("y")? {
                return Err(Error::domain(format!("phi(T) = ({x}, {y}) differs from the expected point")));
            }
            // and psi must invert it
            let back = psi(&t.curve(), &p)?;
            if back != t {
                return Err(Error::domain("psi(phi(T)) differs from T".to_string()));
            }
        }
        "classify" => {
            let t = triangle()?;
            let got = classify(&t)?.tag();
            let want = f.expected["type"].as_str().unwrap_or_default();
            if got != want {
                return Err(Error::domain(format!("classified as type {got}, expected type {want}")));
            }
        }
        "conic" => {
            let t = triangle()?;
            let ((x, y, z), conic) = to_conic_point(&t)?;
            let want: Vec<String> = f.expected["point"]
                .as_array()
                .map(|a| a.iter().filter_map(|v| v.as_str().map(str::to_string)).collect())
                .unwrap_or_default();
            let got = [&x, &y, &z].map(theta_congruent::rational::rat_to_string);
            if got.to_vec() != want
                || f.expected["A"] != json!(conic.a())
                || f.expected["B"] != json!(conic.b())
            {
                return Err(Error::domain(format!(
                    "conic point ({x}, {y}, {z}) on z^2 = {}x^2 + {}y^2 differs from the expected data",
                    conic.a(),
                    conic.b()
                )));
            }
        }
        other => return Err(Error::Parse(format!("unknown fixture kind {other:?}"))),
    }
    Ok(())
}

fn verify_fixtures(data: &str) -> Result<u8> {
    let fixtures: Vec<Fixture> =
        serde_json::from_str(data).map_err(|e| Error::Parse(format!("bad fixture file: {e}")))?;
    let mut failures = 0;
    for f in &fixtures {
        match check_fixture(f) {
            Ok(()) => println!("PASS {}: {}", f.kind, f.paper_note),
            Err(e) => {
                failures += 1;
                println!("FAIL {}: {} ({e})", f.kind, f.paper_note);
            }
        }
    }
    println!("{} fixtures, {} failed", fixtures.len(), failures);
    Ok(if failures > 0 { EXIT_FIXTURE_FAILURE } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::InvalidTriangle { .. } => EXIT_INVALID_TRIANGLE,
                _ => EXIT_INVALID_INPUT,
            };
            ExitCode::from(code)
        }
    }
}
