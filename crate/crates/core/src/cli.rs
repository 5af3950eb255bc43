//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O or format, 3 numeric divergence.
//! `analyze` exits 0 even when tests fail; verdicts live in the report.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::report::{run_battery, BatteryConfig, Verdict};
use crate::analysis::{prd, sensitivity_sweep_with_step, AnalysisReport};
use crate::bits::BitStream;
use crate::cipher::{decrypt_with_step, encrypt_with_step, CipherText};
use crate::error::Error;
use crate::key::{key_space_bits, KeyFile};
use crate::keystream::generate_with_step;
use crate::wav::{read_wav, write_wav};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "chaos-voice",
    version,
    about = "Chaotic mixed-keystream voice cipher and randomness analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BitFormat {
    /// 8-byte little-endian bit count, then bits packed LSB first
    Packed,
    /// one '0'/'1' character per bit
    Ascii,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the first N keystream bits for a key
    Keystream {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = BitFormat::Packed)]
        format: BitFormat,
    },
    /// Encrypt a 16-bit mono PCM WAV file
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a WAV file produced by `encrypt`
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the randomness battery and autocorrelation on a bitstream file
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = BitFormat::Packed)]
        format: BitFormat,
        #[arg(long, default_value_t = crate::analysis::report::DEFAULT_ALPHA)]
        alpha: f64,
        /// Report path; a `.json` or `.jsonl` extension selects JSON Lines
        #[arg(long)]
        report: PathBuf,
    },
    /// Decrypt with each key component perturbed and measure the damage
    Sensitivity {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        delta: f64,
        #[arg(long)]
        report: PathBuf,
    },
    /// Print the key space size in bits
    Keyspace {
        #[arg(long)]
        key: PathBuf,
        #[arg(long, default_value_t = 10)]
        precision: u32,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    /// Attributes `err` to the input named by `what`.
    fn from_error(what: &Path, err: Error) -> Self {
        let code = match err {
            Error::IntegrationDiverged(_) => EXIT_DIVERGED,
            Error::Param(_) => EXIT_USAGE,
            _ => EXIT_IO,
        };
        Failure {
            code,
            message: format!("{}: {err}", what.display()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

trait Context<T> {
    fn context(self, what: &Path) -> CliResult<T>;
}

impl<T, E: Into<Error>> Context<T> for std::result::Result<T, E> {
    fn context(self, what: &Path) -> CliResult<T> {
        self.map_err(|e| Failure::from_error(what, e.into()))
    }
}

/// Parses `argv` (including the program name), executes the command and
/// returns the process exit code. Data goes to `stdout`, diagnostics to
/// `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "chaos-voice: error: {}", f.message);
            f.code
        }
    }
}

fn load_key(path: &Path, stderr: &mut dyn Write) -> CliResult<KeyFile> {
    let text = fs::read_to_string(path).context(path)?;
    let kf = KeyFile::parse(&text).context(path)?;
    for w in kf.key.regime_warnings() {
        let _ = writeln!(stderr, "chaos-voice: warning: {}: {w}", path.display());
    }
    Ok(kf)
}

fn write_report(path: &Path, report: &AnalysisReport) -> CliResult<()> {
    let json = matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("json" | "jsonl")
    );
    let body = if json {
        report.to_json_lines()
    } else {
        report.to_text()
    };
    fs::write(path, body).context(path)
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Keystream {
            key,
            bits,
            out,
            format,
        } => {
            let kf = load_key(&key, stderr)?;
            let stream = generate_with_step(&kf.key, bits, kf.step).context(&key)?;
            let bytes = match format {
                BitFormat::Packed => {
                    let mut buf = Vec::new();
                    stream.write_packed(&mut buf).context(&out)?;
                    buf
                }
                BitFormat::Ascii => format!("{}\n", stream.to_ascii()).into_bytes(),
            };
            fs::write(&out, bytes).context(&out)?;
        }
        Command::Encrypt { key, input, out } => {
            let kf = load_key(&key, stderr)?;
            let sig = read_wav(&input).context(&input)?;
            let ct = encrypt_with_step(&kf.key, &sig, kf.step).context(&key)?;
            write_wav(&out, &ct.to_signal()).context(&out)?;
        }
        Command::Decrypt { key, input, out } => {
            let kf = load_key(&key, stderr)?;
            let sig = read_wav(&input).context(&input)?;
            let plain = decrypt_with_step(&kf.key, &CipherText::from_signal(&sig), kf.step)
                .context(&key)?;
            write_wav(&out, &plain).context(&out)?;
        }
        Command::Analyze {
            input,
            format,
            alpha,
            report,
        } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Failure::usage(format!(
                    "--alpha must lie in (0, 1), got {alpha}"
                )));
            }
            let stream = match format {
                BitFormat::Packed => {
                    BitStream::read_packed(fs::File::open(&input).context(&input)?)
                        .context(&input)?
                }
                BitFormat::Ascii => {
                    BitStream::from_ascii(&fs::read_to_string(&input).context(&input)?)
                        .context(&input)?
                }
            };
            let config = BatteryConfig {
                alpha,
                ..BatteryConfig::default()
            };
            let result = run_battery(stream.as_slice(), &config);
            write_report(&report, &result)?;
            let computed: Vec<_> = result
                .tests
                .iter()
                .map(|t| t.verdict(alpha))
                .filter(|v| matches!(v, Verdict::Pass | Verdict::Fail))
                .collect();
            let passed = computed.iter().filter(|v| **v == Verdict::Pass).count();
            let _ = writeln!(
                stdout,
                "{passed}/{} computed tests passed at alpha = {alpha}; report written to {}",
                computed.len(),
                report.display()
            );
        }
        Command::Sensitivity {
            key,
            input,
            delta,
            report,
        } => {
            if !(delta.is_finite() && delta > 0.0) {
                return Err(Failure::usage(format!(
                    "--delta must be positive, got {delta}"
                )));
            }
            let kf = load_key(&key, stderr)?;
            let sig = read_wav(&input).context(&input)?;
            let rows = sensitivity_sweep_with_step(&kf.key, &sig, delta, kf.step).context(&key)?;
            let encrypted = encrypt_with_step(&kf.key, &sig, kf.step)
                .context(&key)?
                .to_signal();
            let mut result = AnalysisReport {
                prd: prd(&sig.to_f64(), &encrypted.to_f64()).ok(),
                sensitivity_rows: rows,
                ..AnalysisReport::default()
            };
            result.alpha = crate::analysis::report::DEFAULT_ALPHA;
            write_report(&report, &result)?;
            let _ = writeln!(stdout, "sensitivity report written to {}", report.display());
        }
        Command::Keyspace { key, precision } => {
            let kf = load_key(&key, stderr)?;
            let bits = key_space_bits(precision, kf.key.t).map_err(|e| Failure {
                code: EXIT_USAGE,
                message: e.to_string(),
            })?;
            let _ = writeln!(
                stdout,
                "key space: log2({} * 10^{}) = {bits:.2} bits",
                kf.key.t,
                12 * precision
            );
            let _ = writeln!(
                stdout,
                "published estimate for precision 10^-10, t = 4000: ≈ 2^408"
            );
        }
    }
    Ok(())
}
