use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use invlat::catalog;
use invlat::cyclotomic::parse_cycnum;
use invlat::report::{self, Input, Options, Recipe};
use invlat::{Error, Result};

/// `println!` that exits quietly when stdout is a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            return Err(e.into());
        }
    }};
}

#[derive(Parser)]
#[command(name = "invlat", version, about = "Invariant lattices of finite complex linear groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: profile, lattice existence, constructions and structure tags.
    Analyze(Common),
    /// List the built-in groups and quaternion tori.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Build the invariant lattices given by the applicable recipes.
    Construct(Common),
    /// Reflection decomposition of a rank-2n invariant lattice.
    Decompose(Common),
}

#[derive(Args)]
struct Common {
    /// Catalog name, path to a group JSON file, or `-` for stdin.
    input: String,
    #[arg(long)]
    json: bool,
    /// Zn, ds or O.
    #[arg(long)]
    recipe: Option<String>,
    /// Scalar for the ds recipe, e.g. `i`, `zeta3` or a JSON number.
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    cycle_bound: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn options(&self) -> Result<Options> {
        let mut o = Options::default();
        o.recipe = self.recipe.as_deref().map(str::parse::<Recipe>).transpose()?;
        o.c = self.c.as_deref().map(parse_cycnum).transpose()?;
        o.cycle_bound = self.cycle_bound;
        if let Some(s) = self.seed {
            o.seed = s;
        }
        Ok(o)
    }

    fn input(&self) -> Result<Input> {
        if self.input == "-" {
            return report::parse_group_json(&std::io::read_to_string(std::io::stdin())?);
        }
        if catalog::entry(&self.input).is_some() {
            return Ok(Input::Catalog(self.input.clone()));
        }
        if Path::new(&self.input).is_file() {
            return report::parse_group_json(&std::fs::read_to_string(&self.input)?);
        }
        Err(Error::InvalidInput(format!(
            "{} is neither a catalog name nor a file",
            self.input
        )))
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    out!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Catalog { json } => {
            if json {
                return print_json(&catalog::catalog());
            }
            for e in catalog::catalog() {
                out!("{:<22} n={} {:<30} {}", e.name, e.dimension, e.source, e.description);
            }
        }
        Command::Analyze(c) => {
            let r = report::analyze(&c.input()?, &c.options()?)?;
            if c.json {
                print_json(&r)?;
            } else {
                out!("{}", report::summary_line(&r));
                for t in &r.tags {
                    for line in &t.conclusions {
                        out!("  [{}] {}", t.theorem, line);
                    }
                }
            }
        }
        Command::Construct(c) => {
            let lats = report::construct_input(&c.input()?, &c.options()?)?;
            if c.json {
                print_json(&lats)?;
            } else if lats.is_empty() {
                out!("no invariant lattice exists");
            } else {
                for l in &lats {
                    out!("{}: rank {}", l.recipe().unwrap_or("?"), l.rank());
                    for v in l.basis_vectors() {
                        let s: Vec<String> = v.iter().map(ToString::to_string).collect();
                        out!("  ({})", s.join(", "));
                    }
                }
            }
        }
        Command::Decompose(c) => {
            let g = report::decompose(&c.input()?, &c.options()?)?;
            if c.json {
                print_json(&g)?;
            } else {
                let d = &g.decomposition;
                out!("reflections {:?}", g.reflections);
                out!("[Λ : Λ⁰] = {}  det s = {}", d.index, d.s_determinant);
                for (j, l) in d.lines.iter().enumerate() {
                    let disc = l.lattice.as_ref().and_then(|x| x.multiplier_ring().discriminant());
                    match disc {
                        Some(d) => out!("  line {j}: rank {}, multiplier ring of discriminant {d}", l.rank),
                        None => out!("  line {j}: rank {}, multiplier ring Z", l.rank),
                    }
                }
                for m in &d.multipliers {
                    out!("  cycle {:?}: {}", m.cycle, m.value);
                }
                out!(
                    "edges {} connected {}  geom-i {} geom-ii {} geom-iii {}",
                    d.graph.edges.len(),
                    d.graph.connected,
                    g.geom_i,
                    g.geom_ii,
                    g.geom_iii
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
