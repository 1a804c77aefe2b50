fn main() {
    let outcome = holokernel_cli::run(std::env::args_os());
    print!("{}", outcome.stdout);
    std::process::exit(outcome.code);
}
