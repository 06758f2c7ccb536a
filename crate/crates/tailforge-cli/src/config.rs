use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use tailforge::tl::DEFAULT_CAP;

pub const CACHE_ENV: &str = "TAILFORGE_CACHE";
pub const DEFAULT_CROSSING_LIMIT: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Parse,
    Bstate,
    Jones,
    Cjones,
    Tail,
    Kh,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Parse => "parse",
            Command::Bstate => "bstate",
            Command::Jones => "jones",
            Command::Cjones => "cjones",
            Command::Tail => "tail",
            Command::Kh => "kh",
            Command::Verify => "verify",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tailforge", version, about = "Brackets, colored Jones tails and Khovanov homology of link diagrams")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// PD code, `BRAID s:k ...`, or the name of a bundled diagram.
    pub diagram: Option<String>,
    /// Corpus file, one `name: diagram` per line.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Run over the bundled corpus.
    #[arg(long, conflicts_with = "corpus")]
    pub bundled: bool,
    /// Color `N` or range `A..B`.
    #[arg(long)]
    pub color: Option<String>,
    /// Largest color used for tails.
    #[arg(long, default_value_t = 5)]
    pub nmax: u32,
    /// Twist depth standing in for each projector.
    #[arg(long)]
    pub twists: Option<u32>,
    /// Minimal crossing number, if known.
    #[arg(long)]
    pub nmin: Option<usize>,
    /// One JSON record per line.
    #[arg(long)]
    pub json: bool,
    /// Result cache directory; the TAILFORGE_CACHE variable takes precedence.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Attach vanishing-bound checks to `kh` output.
    #[arg(long)]
    pub verify_bounds: bool,
    /// Largest projector arity.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub tl_cap: u32,
    /// Largest (cabled) crossing count handed to the homology code.
    #[arg(long, default_value_t = DEFAULT_CROSSING_LIMIT)]
    pub crossing_limit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Single(String),
    Corpus(PathBuf),
    Bundled,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub source: Source,
    pub colors: RangeInclusive<u32>,
    pub n_max: u32,
    pub twists: u32,
    pub n_min: Option<usize>,
    pub tl_cap: u32,
    pub crossing_limit: usize,
    pub verify_bounds: bool,
    pub json: bool,
    pub cache: Option<PathBuf>,
    pub jobs: Option<usize>,
}

pub fn parse_colors(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad color {t:?}"));
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.trim_start_matches('='))?),
        None => {
            let n = num(s)?;
            Ok(n..=n)
        }
    }
}

impl RunConfig {
    /// Builds a configuration; `env_cache` is the value of `TAILFORGE_CACHE`.
    pub fn from_cli(cli: Cli, env_cache: Option<PathBuf>) -> Result<Self, String> {
        let source = match (cli.diagram, cli.corpus, cli.bundled) {
            (Some(_), Some(_), _) | (Some(_), _, true) => return Err("give a diagram or a corpus, not both".into()),
            (Some(d), None, false) => Source::Single(d),
            (None, Some(p), false) => Source::Corpus(p),
            (None, None, true) => Source::Bundled,
            (None, None, false) if cli.command == Command::Verify => Source::Bundled,
            (None, None, false) => return Err("no diagram given (pass one, --corpus FILE or --bundled)".into()),
            (None, Some(_), true) => unreachable!("clap rejects --corpus with --bundled"),
        };
        let default_color = if cli.command == Command::Cjones { 2 } else { 1 };
        let colors = match cli.color {
            Some(s) => parse_colors(&s)?,
            None => default_color..=default_color,
        };
        let twists = cli.twists.unwrap_or(if cli.command == Command::Verify { 3 } else { 2 });
        let cfg = RunConfig {
            command: cli.command,
            source,
            colors,
            n_max: cli.nmax,
            twists,
            n_min: cli.nmin,
            tl_cap: cli.tl_cap,
            crossing_limit: cli.crossing_limit,
            verify_bounds: cli.verify_bounds,
            json: cli.json,
            cache: env_cache.filter(|p| !p.as_os_str().is_empty()).or(cli.cache),
            jobs: cli.jobs,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.colors.is_empty() {
            return Err(format!("empty color range {}..{}", self.colors.start(), self.colors.end()));
        }
        if *self.colors.start() == 0 {
            return Err("colors start at 1".into());
        }
        if self.tl_cap == 0 || self.crossing_limit == 0 || self.n_max == 0 {
            return Err("caps and --nmax must be positive".into());
        }
        if self.tl_cap > DEFAULT_CAP {
            return Err(format!("--tl-cap above the built-in projector cap {DEFAULT_CAP}"));
        }
        if self.jobs == Some(0) {
            return Err("--jobs must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::parse_from(std::iter::once("tailforge").chain(args.iter().copied()))
    }

    #[test]
    fn color_ranges() {
        assert_eq!(parse_colors("3"), Ok(3..=3));
        assert_eq!(parse_colors("1..4"), Ok(1..=4));
        assert_eq!(parse_colors("2..=3"), Ok(2..=3));
        assert!(parse_colors("x").is_err());
    }

    #[test]
    fn validation() {
        assert!(RunConfig::from_cli(cli(&["cjones", "U", "--color", "3..1"]), None).is_err());
        assert!(RunConfig::from_cli(cli(&["kh", "U", "--tl-cap", "0"]), None).is_err());
        assert!(RunConfig::from_cli(cli(&["jones"]), None).is_err());
        let c = RunConfig::from_cli(cli(&["verify"]), None).unwrap();
        assert_eq!((c.source, c.twists), (Source::Bundled, 3));
        let c = RunConfig::from_cli(cli(&["cjones", "U"]), None).unwrap();
        assert_eq!(c.colors, 2..=2);
    }

    #[test]
    fn env_cache_wins() {
        let c = RunConfig::from_cli(cli(&["jones", "U", "--cache", "/a"]), Some("/b".into())).unwrap();
        assert_eq!(c.cache, Some(PathBuf::from("/b")));
        let c = RunConfig::from_cli(cli(&["jones", "U", "--cache", "/a"]), None).unwrap();
        assert_eq!(c.cache, Some(PathBuf::from("/a")));
    }
}
