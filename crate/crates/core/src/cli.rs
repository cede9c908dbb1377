//! Command-line surface: one subcommand per analysis, plot-ready CSV/JSON
//! outputs, reproducible seeds.
//!
//! Every command prints its effective configuration (seed included) before
//! writing files, and identical configurations produce byte-identical
//! output files. An optional JSON config file supplies defaults; flags win.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::corpus::{self, Encoding, TokenSequence};
use crate::freqstats::{self, FrequencyDistribution, GrowthCurve};
use crate::io;
use crate::nullmodel::{self, Metric};
use crate::rbt;
use crate::sections::{self, SectionSpec};
use crate::simon::{self, HalfReadRegime, SimonParams};
use crate::{Error, Result};

const DEFAULT_SEED: u64 = 42;
const DEFAULT_SAMPLES: usize = 1_000;
const DEFAULT_ENSEMBLE: usize = 200;
const DEFAULT_PART_LENGTH: usize = 25_000;
const DEFAULT_ALPHA: f64 = 0.083;
const DEFAULT_TOKENS: usize = 110_224;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingArg {
    Utf8,
    Latin1,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Utf8 => Encoding::Utf8,
            EncodingArg::Latin1 => Encoding::Latin1,
        }
    }
}

/// Options shared by every subcommand.
#[derive(Debug, Args)]
struct CommonOpts {
    /// RNG seed (printed; identical seeds give identical outputs)
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for emitted files
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
    /// Input text encoding
    #[arg(long, value_enum)]
    encoding: Option<EncodingArg>,
    /// Output format for tabular files
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// JSON config file with defaults for any option (flags win)
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Defaults loadable from a JSON config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    seed: Option<u64>,
    out: Option<PathBuf>,
    encoding: Option<EncodingArg>,
    format: Option<OutputFormat>,
    samples: Option<usize>,
    ensemble: Option<usize>,
    part_length: Option<usize>,
    n_parts: Option<Vec<usize>>,
    alpha: Option<f64>,
    tokens: Option<usize>,
    books: Option<usize>,
    k_max: Option<usize>,
}

impl ConfigFile {
    /// Parse config-file text; unknown fields are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        io::from_json(text)
    }

    fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => Self::parse(&std::fs::read_to_string(p)?),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bookstat", version, about = "Word-frequency statistics for books")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Frequency spectrum of a text: raw and log2-binned CSV
    Freq {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Averaged section spectra for a list of n-parts
    Sections {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated part counts, e.g. 1,20,200
        #[arg(long, value_delimiter = ',')]
        n_parts: Vec<usize>,
        /// Random section placements averaged per part count
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Real vs shuffled growth curves, three-part curves and xi statistics
    Growth {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        part_length: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Half-read profiles with shuffle-ensemble bands
    Halfread {
        #[arg(long)]
        input: PathBuf,
        /// Number of shuffles in the null ensemble
        #[arg(long)]
        ensemble: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Generate Simon-model books and the analytic asymptote table
    Simon {
        #[arg(long)]
        alpha: Option<f64>,
        /// Tokens per generated book
        #[arg(long)]
        tokens: Option<usize>,
        /// Number of books to generate
        #[arg(long)]
        books: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Shuffle, build the growth curve, fit all three parametrizations and
    /// project the spectrum to requested section sizes
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// Part counts for projected spectra, e.g. 20,200
        #[arg(long, value_delimiter = ',')]
        n_parts: Vec<usize>,
        /// Truncation order (defaults to the empirical k_max)
        #[arg(long)]
        k_max: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Section a long novel to the size of a short text and emit both
    /// binned spectra
    Compare {
        /// The long novel to section
        #[arg(long)]
        novel: PathBuf,
        /// The short text setting the section size
        #[arg(long)]
        reference: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

/// Resolved settings after merging flags, config file and defaults.
struct Resolved {
    seed: u64,
    out: PathBuf,
    encoding: Encoding,
    format: OutputFormat,
    cfg: ConfigFile,
}

impl Resolved {
    fn new(common: &CommonOpts) -> Result<Self> {
        let cfg = ConfigFile::load(common.config.as_deref())?;
        Ok(Self {
            seed: common.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED),
            out: common.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from(".")),
            encoding: common.encoding.or(cfg.encoding).map(Into::into).unwrap_or(Encoding::Utf8),
            format: common.format.or(cfg.format).unwrap_or(OutputFormat::Csv),
            cfg,
        })
    }

    fn load_tokens(&self, path: &Path) -> Result<TokenSequence> {
        let tokens = corpus::load_text(path, self.encoding)?;
        if tokens.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(tokens)
    }

    fn write(&self, name: &str, contents: &str) -> Result<()> {
        std::fs::create_dir_all(&self.out)?;
        let path = self.out.join(name);
        std::fs::write(&path, contents)?;
        println!("wrote {}", path.display());
        Ok(())
    }

    fn write_dist(&self, base: &str, dist: &FrequencyDistribution) -> Result<()> {
        match self.format {
            OutputFormat::Csv => self.write(&format!("{base}.csv"), &io::dist_to_csv(dist)),
            OutputFormat::Json => {
                self.write(&format!("{base}.json"), &io::to_json_pretty(&io::dist_rows(dist))?)
            }
        }
    }

    fn write_binned(&self, base: &str, dist: &FrequencyDistribution) -> Result<()> {
        let binned = freqstats::log2_bin(dist)?;
        match self.format {
            OutputFormat::Csv => self.write(&format!("{base}.csv"), &io::binned_to_csv(&binned)),
            OutputFormat::Json => {
                self.write(&format!("{base}.json"), &io::to_json_pretty(&binned.bins)?)
            }
        }
    }

    fn write_growth(&self, base: &str, curve: &GrowthCurve) -> Result<()> {
        match self.format {
            OutputFormat::Csv => self.write(&format!("{base}.csv"), &io::growth_to_csv(curve)),
            OutputFormat::Json => {
                self.write(&format!("{base}.json"), &io::to_json_pretty(&io::growth_rows(curve))?)
            }
        }
    }
}

fn print_config(command: &str, seed: u64, extras: &[(&str, String)]) {
    let mut line = format!("config: command={command} seed={seed}");
    for (k, v) in extras {
        let _ = write!(line, " {k}={v}");
    }
    println!("{line}");
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Freq { input, common } => cmd_freq(&input, &common),
        Command::Sections { input, n_parts, samples, common } => {
            cmd_sections(&input, &n_parts, samples, &common)
        }
        Command::Growth { input, part_length, common } => {
            cmd_growth(&input, part_length, &common)
        }
        Command::Halfread { input, ensemble, common } => cmd_halfread(&input, ensemble, &common),
        Command::Simon { alpha, tokens, books, common } => {
            cmd_simon(alpha, tokens, books, &common)
        }
        Command::Fit { input, n_parts, k_max, common } => {
            cmd_fit(&input, &n_parts, k_max, &common)
        }
        Command::Compare { novel, reference, samples, common } => {
            cmd_compare(&novel, &reference, samples, &common)
        }
    }
}

fn cmd_freq(input: &Path, common: &CommonOpts) -> Result<()> {
    let r = Resolved::new(common)?;
    print_config("freq", r.seed, &[("input", input.display().to_string())]);
    let tokens = r.load_tokens(input)?;
    let dist = freqstats::frequency_distribution(&tokens);
    println!(
        "{}: W_T={} W_D={} mean_k={:.4} k_max={}",
        tokens.source_id,
        dist.w_total(),
        dist.w_distinct(),
        dist.mean_k(),
        dist.k_max()
    );
    r.write_dist("freq_dist", &dist)?;
    r.write_binned("freq_binned", &dist)
}

fn cmd_sections(
    input: &Path,
    n_parts: &[usize],
    samples: Option<usize>,
    common: &CommonOpts,
) -> Result<()> {
    let r = Resolved::new(common)?;
    let n_parts: Vec<usize> = if n_parts.is_empty() {
        r.cfg.n_parts.clone().unwrap_or_else(|| vec![1, 20, 200])
    } else {
        n_parts.to_vec()
    };
    let samples = samples.or(r.cfg.samples).unwrap_or(DEFAULT_SAMPLES);
    print_config(
        "sections",
        r.seed,
        &[
            ("input", input.display().to_string()),
            ("n_parts", format!("{n_parts:?}")),
            ("samples", samples.to_string()),
        ],
    );
    let tokens = r.load_tokens(input)?;
    for &n in &n_parts {
        let spec = SectionSpec { n_parts: n, sample_count: samples, periodic: true };
        let dist = sections::section_distribution(&tokens, &spec, r.seed)?;
        r.write_dist(&format!("sections_n{n}_dist"), &dist)?;
        r.write_binned(&format!("sections_n{n}_binned"), &dist)?;
    }
    Ok(())
}

fn cmd_growth(input: &Path, part_length: Option<usize>, common: &CommonOpts) -> Result<()> {
    let r = Resolved::new(common)?;
    let part_length = part_length.or(r.cfg.part_length).unwrap_or(DEFAULT_PART_LENGTH);
    print_config(
        "growth",
        r.seed,
        &[("input", input.display().to_string()), ("part_length", part_length.to_string())],
    );
    let tokens = r.load_tokens(input)?;
    let real = freqstats::vocabulary_growth(&tokens)?;
    r.write_growth("growth_real", &real)?;
    let shuffled = nullmodel::shuffle_book(&tokens, r.seed);
    let shuffled_curve = freqstats::vocabulary_growth(&shuffled)?;
    r.write_growth("growth_shuffled", &shuffled_curve)?;
    for part in 0..3 {
        let curve = sections::growth_from_offset(&tokens, part * part_length, part_length)?;
        r.write_growth(&format!("growth_part{}", part + 1), &curve)?;
    }
    let xi = sections::xi_stats(&tokens, part_length)?;
    r.write("xi.json", &io::xi_to_json(&xi)?)?;
    let xi_shuffled = sections::xi_stats(&shuffled, part_length)?;
    r.write("xi_shuffled.json", &io::xi_to_json(&xi_shuffled)?)?;
    println!(
        "xi_rms={:.2} xi_delta={:.2} (shuffled: {:.2}, {:.2})",
        xi.xi_rms, xi.xi_delta, xi_shuffled.xi_rms, xi_shuffled.xi_delta
    );
    Ok(())
}

fn cmd_halfread(input: &Path, ensemble: Option<usize>, common: &CommonOpts) -> Result<()> {
    let r = Resolved::new(common)?;
    let ensemble = ensemble.or(r.cfg.ensemble).unwrap_or(DEFAULT_ENSEMBLE);
    print_config(
        "halfread",
        r.seed,
        &[("input", input.display().to_string()), ("ensemble", ensemble.to_string())],
    );
    let tokens = r.load_tokens(input)?;
    let profile = nullmodel::half_read_profile(&tokens)?;
    for metric in [Metric::FractionAtHalf, Metric::PrefixForHalf] {
        let bands = nullmodel::null_bands(&tokens, metric, ensemble, r.seed)?;
        let records = io::half_read_records(&profile, &bands)?;
        r.write(&format!("halfread_{metric}.json"), &io::to_json_pretty(&records)?)?;
    }
    Ok(())
}

fn cmd_simon(
    alpha: Option<f64>,
    tokens: Option<usize>,
    books: Option<usize>,
    common: &CommonOpts,
) -> Result<()> {
    let r = Resolved::new(common)?;
    let alpha = alpha.or(r.cfg.alpha).unwrap_or(DEFAULT_ALPHA);
    let total = tokens.or(r.cfg.tokens).unwrap_or(DEFAULT_TOKENS);
    let books = books.or(r.cfg.books).unwrap_or(1);
    print_config(
        "simon",
        r.seed,
        &[
            ("alpha", alpha.to_string()),
            ("tokens", total.to_string()),
            ("books", books.to_string()),
        ],
    );
    for book in 0..books {
        let params = SimonParams::new(alpha, total, crate::nullmodel::member_seed(r.seed, book as u64))?;
        let generated = simon::generate_simon(&params)?;
        r.write(&format!("simon_book{}.txt", book + 1), &generated.tokens.join(" "))?;
    }
    if alpha < 1.0 {
        let table = serde_json::json!({
            "alpha": alpha,
            "prefix_for_half_k1": simon::simon_prefix_for_half(alpha, HalfReadRegime::K1)?,
            "prefix_for_half_k2": simon::simon_prefix_for_half(alpha, HalfReadRegime::K2)?,
            "prefix_for_half_large_k": simon::simon_prefix_for_half(alpha, HalfReadRegime::LargeK)?,
        });
        r.write("simon_asymptotes.json", &serde_json::to_string_pretty(&table).unwrap())?;
    }
    Ok(())
}

fn cmd_fit(input: &Path, n_parts: &[usize], k_max: Option<usize>, common: &CommonOpts) -> Result<()> {
    let r = Resolved::new(common)?;
    print_config(
        "fit",
        r.seed,
        &[("input", input.display().to_string()), ("n_parts", format!("{n_parts:?}"))],
    );
    let tokens = r.load_tokens(input)?;
    let dist = freqstats::frequency_distribution(&tokens);
    let k_max = k_max.or(r.cfg.k_max).unwrap_or(dist.k_max() as usize);
    let shuffled = nullmodel::shuffle_book(&tokens, r.seed);
    let target = freqstats::vocabulary_growth(&shuffled)?;
    let init_gamma = rbt::initial_gamma(&freqstats::log2_bin(&dist)?);
    let opts = rbt::FitOptions { init_gamma, ..Default::default() };

    let mut records = Vec::new();
    for kind in [rbt::FormKind::Power, rbt::FormKind::PowerExpCutoff, rbt::FormKind::Augmented] {
        let fit = rbt::fit_form(kind, &target, k_max, &opts)?;
        println!(
            "{kind}: gamma={:.4} b={:.6} c={:.4} goodness={:.5} objective={:.3e}",
            fit.form.gamma, fit.form.b, fit.form.c, fit.goodness, fit.objective
        );
        records.push(io::FitResultRecord::from(&fit));
    }
    r.write("fits.json", &io::to_json_pretty(&records)?)?;

    // a k_max below the empirical maximum restricts the projection to the
    // words with k <= k_max; renormalize over the retained mass
    let mut p = dist.p_vec(k_max);
    let mass: f64 = p.iter().sum();
    if mass <= 0.0 {
        return Err(Error::InvalidInput("k_max excludes every frequency class".into()));
    }
    for v in &mut p {
        *v /= mass;
    }
    let retained_distinct = dist.w_distinct() * mass;
    for &n in n_parts {
        if n == 0 {
            return Err(Error::InvalidInput("n_parts entries must be positive".into()));
        }
        let section_total = (dist.w_total() / n as f64).floor().max(1.0);
        let ctx = rbt::RbtContext::new(dist.w_total(), section_total, k_max)?;
        let projected = rbt::rbt_forward(&p, &ctx)?;
        let expected_distinct =
            rbt::expected_distinct(&p, retained_distinct, dist.w_total(), section_total);
        let counts: std::collections::BTreeMap<u64, f64> = projected
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(i, &v)| ((i + 1) as u64, v * expected_distinct))
            .collect();
        let projected_dist = FrequencyDistribution::from_counts(counts);
        r.write_dist(&format!("fit_projected_n{n}"), &projected_dist)?;
        r.write_binned(&format!("fit_projected_n{n}_binned"), &projected_dist)?;
    }
    Ok(())
}

fn cmd_compare(
    novel: &Path,
    reference: &Path,
    samples: Option<usize>,
    common: &CommonOpts,
) -> Result<()> {
    let r = Resolved::new(common)?;
    let samples = samples.or(r.cfg.samples).unwrap_or(DEFAULT_SAMPLES);
    print_config(
        "compare",
        r.seed,
        &[
            ("novel", novel.display().to_string()),
            ("reference", reference.display().to_string()),
            ("samples", samples.to_string()),
        ],
    );
    let novel_tokens = r.load_tokens(novel)?;
    let ref_tokens = r.load_tokens(reference)?;
    let n_parts = ((novel_tokens.len() as f64 / ref_tokens.len() as f64).round() as usize).max(1);
    println!("n_parts={n_parts} (section size ~{} tokens)", novel_tokens.len() / n_parts);
    let spec = SectionSpec { n_parts, sample_count: samples, periodic: true };
    let novel_sections = sections::section_distribution(&novel_tokens, &spec, r.seed)?;
    let ref_dist = freqstats::frequency_distribution(&ref_tokens);
    r.write_binned("compare_novel_binned", &novel_sections)?;
    r.write_binned("compare_reference_binned", &ref_dist)?;
    Ok(())
}
