//! Drives the `hids` command line in-process and captures its JSON output.
//!
//! Run with `cargo run --example cli_driver`.

use heisenberg_ids::cli::run_with;

fn main() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(
        ["hids", "--format", "json", "ids-magnetic", "--n", "2", "--lambda", "3.5"],
        &mut out,
        &mut err,
    );
    println!("exit code {code}");
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
}
