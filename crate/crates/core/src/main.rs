use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let out = operadic::cli::run(&argv);
    if !out.certificate.is_empty() && !argv.iter().any(|a| a == "--out" || a.starts_with("--out="))
    {
        std::io::stdout()
            .write_all(&out.certificate)
            .expect("stdout");
    }
    if out.code == 0 && out.certificate.is_empty() {
        print!("{}", out.message);
    } else if !out.message.is_empty() {
        eprintln!("{}", out.message.trim_end());
    }
    std::process::exit(out.code);
}
