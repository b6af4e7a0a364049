#include <shodge/checks.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace shodge;

namespace {

struct Options {
    int n = 0;
    int parity = 0;
    int degree = 0;
    std::string lambda;
    std::string w;
    std::string expect;
    std::string output;
    std::vector<std::string> files;
};

// Malformed command-line input that CLI11 cannot see.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw usage_error("cannot open " + path);
    }
    return Json::parse(in);
}

// Inline JSON when the argument starts with '{', otherwise a path.
Json inline_or_file(const std::string& arg)
{
    auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && arg[first] == '{') {
        return Json::parse(arg);
    }
    return read_file(arg);
}

ToricPoissonStructure lambda_arg(const Options& o)
{
    if (o.lambda.empty()) {
        if (o.n <= 0) {
            throw usage_error("--n or --lambda is required");
        }
        return ToricPoissonStructure(o.n);
    }
    if (o.n < 0) {
        throw usage_error("--n must be positive");
    }
    return lambda_from_json(inline_or_file(o.lambda), o.n);
}

std::string fixture_dir()
{
    const char* env = std::getenv("SHODGE_FIXTURES");
    return env && *env ? env : SHODGE_FIXTURE_DIR;
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw usage_error("cannot write " + path);
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void json(const Json& j) { stream() << j.dump() << "\n"; }
    void line(const std::string& s) { stream() << s << "\n"; }

private:
    std::ofstream file_;
};

Json monodromy_json(const KLattice& L, int n)
{
    Json m = Json::object();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            auto M = lattice_matrix(monodromy(i, j, n), L);
            if (!M) {
                throw domain_error("monodromy does not preserve the lattice");
            }
            m[pair_key(i, j)] = int_matrix_to_json(*M);
        }
    }
    return m;
}

int run(const std::string& cmd, const Options& o)
{
    Output out(o.output);
    if (cmd == "qparam") {
        out.json({{"q", pair_map_to_json(quantum_parameter(lambda_arg(o)))}});
    } else if (cmd == "flag") {
        auto s = lambda_arg(o);
        out.json(flag_to_json(KBasis(s.n, o.parity), poisson_hodge_flag(s, o.parity)));
    } else if (cmd == "torelli") {
        auto a = lambda_from_json(read_file(o.files.at(0)), o.n);
        auto b = lambda_from_json(read_file(o.files.at(1)), o.n);
        if (a.n != b.n) {
            int n = std::max(a.n, b.n);
            a = lambda_from_json(read_file(o.files.at(0)), n);
            b = lambda_from_json(read_file(o.files.at(1)), n);
        }
        out.json(torelli_equal(a, b));
    } else if (cmd == "zeros") {
        out.json(zero_obstruction_to_json(zero_obstruction(lambda_arg(o))));
    } else if (cmd == "mul") {
        auto a = qtorus_element_from_json(read_file(o.files.at(0)));
        auto b = qtorus_element_from_json(read_file(o.files.at(1)));
        if (!(a.params() == b.params())) {
            throw domain_error("factors live in different quantum tori");
        }
        out.json(qtorus_element_to_json(qt_mul(a, b)));
    } else if (cmd == "centre") {
        QTorusParams p(lambda_arg(o));
        auto gens = centre_generators_torsion(p);
        out.json({{"generators", int_matrix_to_json(gens)}, {"index", integer_to_json(abs(determinant(gens)))}});
    } else if (cmd == "transport") {
        QTorusParams p(lambda_arg(o));
        auto L = k_lattice(p, o.degree);
        out.json({{"connection", connection_to_json(gauss_manin_transport(p))},
                  {"lattice", mhs_to_json(L.k.mhs)},
                  {"monodromy", monodromy_json(L, p.n)}});
    } else if (cmd == "class") {
        QTorusParams p(lambda_arg(o));
        auto cls = extension_class(p);
        auto poisson = quantum_parameter(p.poisson());
        out.json({{"class", pair_map_to_json(cls)}, {"poisson", pair_map_to_json(poisson)}, {"agree", cls == poisson}});
    } else if (cmd == "gysin") {
        out.json(graded_to_json(gysin_weight_graded(gysin_input_from_json(read_file(o.files.at(0))))));
    } else if (cmd == "star-q") {
        auto q = q_parameter(series_from_json(read_file(o.w)));
        out.json(series_to_json(q));
        if (o.expect == "exp") {
            auto c = compare_exp(q);
            if (!c.match) {
                out.line("MISMATCH with e^ħ at ħ^" + std::to_string(*c.first_mismatch));
                return 1;
            }
            out.line("MATCH e^ħ through ħ^" + std::to_string(c.through));
        } else if (!o.expect.empty()) {
            throw usage_error("--expect only accepts 'exp'");
        }
    } else if (cmd == "verify") {
        auto results = run_reference_checks(fixture_dir());
        int failed = 0;
        for (auto& r : results) {
            out.line(format_check(r));
            failed += r.passed ? 0 : 1;
        }
        out.line(std::to_string(results.size() - static_cast<std::size_t>(failed)) + "/" +
                 std::to_string(results.size()) + " checks passed");
        return failed == 0 ? 0 : 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact semiclassical Hodge theory of Poisson and quantum tori", "shodge"};
    app.require_subcommand(1);
    Options o;
    std::string chosen;
    app.add_option("-o,--output", o.output, "Write the result to a file instead of stdout");

    auto lambda_opts = [&](CLI::App* sub) {
        sub->add_option("--n", o.n, "Torus dimension (inferred from the largest index if omitted)");
        sub->add_option("--lambda", o.lambda, "Inline JSON object or path: {\"i,j\": [[power, \"p/q\"], ...]}");
    };
    auto on = [&](CLI::App* sub, std::string name) { sub->callback([&chosen, name] { chosen = name; }); };

    auto* qparam = app.add_subcommand("qparam", "Quantum parameters q_ij of a toric Poisson structure");
    lambda_opts(qparam);
    on(qparam, "qparam");

    auto* flag = app.add_subcommand("flag", "Poisson-deformed Hodge flag on K-theory of the given parity");
    lambda_opts(flag);
    flag->add_option("--parity", o.parity, "K-theory degree")->default_val(0);
    on(flag, "flag");

    auto* torelli = app.add_subcommand("torelli", "Do two lambda files give the same quantum parameters");
    torelli->add_option("files", o.files, "Two lambda JSON files")->required()->expected(2);
    torelli->add_option("--n", o.n, "Torus dimension");
    on(torelli, "torelli");

    auto* zeros = app.add_subcommand("zeros", "Obstruction to lifting the zero section");
    lambda_opts(zeros);
    on(zeros, "zeros");

    auto* qtorus = app.add_subcommand("qtorus", "Quantum torus computations");
    qtorus->require_subcommand(1);
    auto* mul = qtorus->add_subcommand("mul", "Product of two quantum torus elements");
    mul->add_option("files", o.files, "Two element JSON files")->required()->expected(2);
    on(mul, "mul");
    auto* centre = qtorus->add_subcommand("centre", "Centre of a root-of-unity quantum torus");
    lambda_opts(centre);
    on(centre, "centre");
    auto* transport = qtorus->add_subcommand("transport", "Gauss-Manin transport, lattice and monodromy");
    lambda_opts(transport);
    transport->add_option("--degree", o.degree, "K-theory degree")->default_val(0);
    on(transport, "transport");
    auto* cls = qtorus->add_subcommand("class", "Extension class of the transported lattice");
    lambda_opts(cls);
    on(cls, "class");

    auto* gysin = app.add_subcommand("gysin", "Weight-graded K-theory of a complement");
    gysin->add_option("input", o.files, "Gysin input JSON")->required()->expected(1);
    on(gysin, "gysin");

    auto* starq = app.add_subcommand("star-q", "q(hbar) = w(hbar)/w(-hbar) from a weight series");
    starq->add_option("--w", o.w, "Weight series JSON")->required();
    starq->add_option("--expect", o.expect, "Compare with a reference series (exp)");
    on(starq, "star-q");

    auto* verify = app.add_subcommand("verify", "Run the reference checks");
    on(verify, "verify");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return run(chosen, o);
    } catch (const schema_error& e) {
        std::cerr << "schema error at " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "malformed JSON: " << e.what() << "\n";
        return 2;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
