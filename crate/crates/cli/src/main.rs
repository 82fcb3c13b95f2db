use std::io;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed = std::env::var(levy_scale_cli::SEED_VAR).ok();
    let code = levy_scale_cli::run(&args, seed.as_deref(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
