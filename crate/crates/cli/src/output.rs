use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::args::{Command, Format};

pub const TOOL: &str = "ctinv";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Seventeen significant digits, the shortest width that round-trips.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "NaN".to_string()
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Every JSON document carries the schema, tool version and the full
/// command line that produced it.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: &'a str,
    pub tool: &'a str,
    pub version: &'a str,
    pub config: Config<'a>,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Serialize)]
pub struct Config<'a> {
    pub format: Format,
    pub sequential: bool,
    #[serde(flatten)]
    pub command: &'a Command,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(schema: &'a str, config: Config<'a>, body: T) -> Self {
        Envelope {
            schema,
            tool: TOOL,
            version: VERSION,
            config,
            body,
        }
    }
}

/// Where data goes, and where the human summary goes so it never mixes
/// with data on stdout.
pub struct Sink {
    data: Box<dyn Write>,
    to_file: bool,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> io::Result<Self> {
        Ok(match path {
            Some(p) => Sink {
                data: Box::new(BufWriter::new(File::create(p)?)),
                to_file: true,
            },
            None => Sink {
                data: Box::new(BufWriter::new(io::stdout().lock())),
                to_file: false,
            },
        })
    }

    pub fn data(&mut self) -> &mut dyn Write {
        &mut *self.data
    }

    pub fn json<T: Serialize>(&mut self, value: &T) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut self.data, value).map_err(io::Error::from)?;
        writeln!(self.data)
    }

    /// Summary lines: stdout when data went to a file, stderr otherwise.
    pub fn note(&self, line: &str) {
        if self.to_file {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.data.flush()
    }
}
