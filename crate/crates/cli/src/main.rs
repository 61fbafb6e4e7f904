fn main() {
    std::process::exit(ldgraphs::run(std::env::args_os()));
}
