use std::io::Write;

fn main() {
    let out = koszulkit::cli::run_cli(std::env::args_os(), &mut std::io::stdin());
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::process::exit(out.code);
}
