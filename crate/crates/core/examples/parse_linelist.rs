//! Read a fixed-width line list, report diagnostics and write the kept
//! records back out.
//!
//! ```text
//! cargo run --example parse_linelist -- lines.par [lo:hi]
//! ```

use std::io::Write;
use std::path::PathBuf;

use narrowline::linelist::read_linelist;
use narrowline::units::Window;

fn main() -> narrowline::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().expect("usage: parse_linelist FILE [LO:HI]"));
    let window = args
        .next()
        .map(|w| {
            let (lo, hi) = w.split_once(':').expect("window is LO:HI");
            Window::new(lo.parse().unwrap(), hi.parse().unwrap())
        })
        .transpose()?;

    let table = read_linelist(&path, window)?;
    eprintln!(
        "{}: {} lines, {} fatal, {} warnings",
        table.source(),
        table.len(),
        table.fatal_count(),
        table.warning_count()
    );
    for d in table.diagnostics() {
        eprintln!("  {d}");
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    table.write_records(&mut out)?;
    out.flush()?;
    Ok(())
}
