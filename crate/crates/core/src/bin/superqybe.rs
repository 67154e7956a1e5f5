use std::io::Write;

fn main() {
    let env = std::env::var(superqybe::cli::TOLERANCE_ENV).ok();
    let out = superqybe::cli::run_from_args(std::env::args_os(), env.as_deref());
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::process::exit(out.code);
}
