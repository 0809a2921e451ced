// palqa command-line tool.
//
// Exit codes: 0 success, 1 usage, 2 format/corruption, 3 internal invariant
// violation (including a failed verify).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "palqa/palqa.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFormat = 2;
constexpr int kExitInvariant = 3;

class InvariantFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::ios_base::failure("write failed: " + path);
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& data) {
    write_file(path, std::string(data.begin(), data.end()));
}

palqa::CostOptions cost_options(bool literal_ones, bool sign_per_negative) {
    palqa::CostOptions c;
    c.state = literal_ones ? palqa::StateModel::literal : palqa::StateModel::distributed;
    c.sign = sign_per_negative ? palqa::SignModel::per_negative : palqa::SignModel::per_coefficient;
    return c;
}

void warn_saturation(std::size_t saturated) {
    if (saturated > 0)
        std::cerr << "warning: " << saturated << " coefficient magnitude(s) clipped to 255; "
                  << "use a larger -q for lossless coefficient transport\n";
}

// Quantized block `index` of the image and its coefficients renumbered to block 0.
struct SelectedBlock {
    palqa::QuantBlock block;
    std::vector<palqa::SparseCoeff> coeffs;
    std::size_t saturated = 0;
};

SelectedBlock select_block(const palqa::GrayImage& img, int Q, std::size_t index) {
    const auto qi = palqa::quantize_image(img, Q);
    if (index >= qi.blocks.size())
        throw palqa::InvalidArgument("block " + std::to_string(index) + " out of range (image has " +
                                     std::to_string(qi.blocks.size()) + " blocks)");
    SelectedBlock s;
    s.block = qi.blocks[index];
    const auto sparse = palqa::extract_sparse(std::span<const palqa::QuantBlock>(&s.block, 1));
    s.coeffs = sparse.coeffs;
    s.saturated = sparse.saturated;
    return s;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

std::vector<int> parse_q_list(const std::vector<std::string>& items) {
    std::vector<int> qs;
    for (const auto& tok : split_list(items)) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw palqa::InvalidArgument("bad Q value '" + tok + "'");
        }
        if (used != tok.size() || v < 1) throw palqa::InvalidArgument("bad Q value '" + tok + "'");
        qs.push_back(v);
    }
    if (qs.empty()) throw palqa::InvalidArgument("empty Q list");
    return qs;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PALQA quantum-image compression toolkit"};
    app.require_subcommand(1);

    std::string input;
    std::string output;
    int q = 16;
    std::size_t block = 0;
    bool literal_ones = false;
    bool sign_per_negative = false;

    auto* enc = app.add_subcommand("encode", "Compress a PGM into a payload and print its gate budget");
    enc->add_option("input", input, "input PGM")->required()->check(CLI::ExistingFile);
    enc->add_option("-q,--quant", q, "quantization factor")->check(CLI::Range(1, 65535));
    enc->add_option("-o,--output", output, "payload path")->required();
    bool with_circuits = false;
    enc->add_flag("--export-circuit", with_circuits, "also build per-block PALQA circuits and report gate counts");
    enc->add_flag("--literal-ones", literal_ones, "charge LSB ones once per coefficient in B_state");
    enc->add_flag("--sign-per-negative", sign_per_negative, "charge sign gates only for negative coefficients");

    auto* dec = app.add_subcommand("decode", "Reconstruct a PGM from a payload");
    dec->add_option("input", input, "payload")->required()->check(CLI::ExistingFile);
    dec->add_option("-o,--output", output, "output PGM")->required();

    auto* rd = app.add_subcommand("rd-sweep", "Rate-distortion sweep over quantization factors");
    std::vector<std::string> q_items{"8,16,32,60,90,120"};
    std::vector<std::string> method_items{"palqa,nzneqr,jpeg_like"};
    std::string csv_path;
    rd->add_option("input", input, "input PGM")->required()->check(CLI::ExistingFile);
    rd->add_option("-q,--quant", q_items, "quantization factors (comma separated)");
    rd->add_option("--methods", method_items, "methods: palqa, nzneqr, jpeg_like");
    rd->add_option("--csv", csv_path, "CSV output path (default: stdout)");
    rd->add_flag("--literal-ones", literal_ones, "charge LSB ones once per coefficient in B_state");
    rd->add_flag("--sign-per-negative", sign_per_negative, "charge sign gates only for negative coefficients");

    auto* exp = app.add_subcommand("export-circuit", "Write one block's state-preparation circuit as text");
    std::string method = "palqa";
    exp->add_option("input", input, "input PGM")->required()->check(CLI::ExistingFile);
    exp->add_option("-q,--quant", q, "quantization factor")->check(CLI::Range(1, 65535));
    exp->add_option("--block", block, "raster block index");
    exp->add_option("--method", method, "palqa or zscneqr")->check(CLI::IsMember({"palqa", "zscneqr"}));
    exp->add_option("-o,--output", output, "output path (default: stdout)");

    auto* ver = app.add_subcommand("verify", "Simulate one block's circuits and check reconstruction");
    bool tamper = false;
    ver->add_option("input", input, "input PGM")->required()->check(CLI::ExistingFile);
    ver->add_option("-q,--quant", q, "quantization factor")->check(CLI::Range(1, 65535));
    ver->add_option("--block", block, "raster block index");
    ver->add_flag("--tamper", tamper, "inject one extra X gate into the PALQA circuit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*enc) {
            const auto img = palqa::read_pgm(read_file(input));
            palqa::EncodeOptions opt;
            opt.cost = cost_options(literal_ones, sign_per_negative);
            opt.build_circuits = with_circuits;
            const auto r = palqa::encode(img, q, opt);
            write_file(output, r.payload);
            warn_saturation(r.saturated);
            const auto& b = r.budget;
            std::cout << "width=" << img.width() << "\nheight=" << img.height() << "\nQ=" << q
                      << "\ntc_nz=" << r.tc_nz << "\nones=" << r.ones_count << "\nsaturated=" << r.saturated
                      << "\nq_ones=" << b.q_ones << "\nb_state=" << b.b_state << "\nb_sign=" << b.b_sign
                      << "\nb_aux=" << b.b_aux << "\nb_gpp=" << b.b_gpp << "\nb_total=" << b.b_total
                      << "\ngpp=" << palqa::format_real(palqa::gpp(b))
                      << "\nbpp=" << palqa::format_real(palqa::bpp(r.payload.size(), img.width(), img.height()))
                      << "\npayload_bytes=" << r.payload.size() << "\n";
            if (with_circuits) {
                const auto& c = r.circuits;
                std::cout << "circuit_blocks=" << c.blocks << "\ncircuit_gates=" << c.gates.total
                          << "\ncircuit_h=" << c.gates.h << "\ncircuit_x=" << c.gates.x
                          << "\ncircuit_mcx=" << c.gates.mcx << "\ncircuit_reset=" << c.gates.reset
                          << "\ncircuit_position_connections=" << c.position_connections
                          << "\ncircuit_trash_touches=" << c.trash_touches << "\n";
            }
        } else if (*dec) {
            const auto img = palqa::decode(read_file(input));
            write_file(output, palqa::write_pgm(img));
            std::cout << "width=" << img.width() << "\nheight=" << img.height() << "\n";
        } else if (*rd) {
            const auto img = palqa::read_pgm(read_file(input));
            const auto qs = parse_q_list(q_items);
            const auto methods = split_list(method_items);
            const auto points = palqa::rd_sweep(img, qs, methods, cost_options(literal_ones, sign_per_negative));
            std::size_t saturated = 0;
            for (const auto& p : points) saturated = std::max(saturated, p.saturated);
            warn_saturation(saturated);
            const auto csv = palqa::rd_csv(points);
            if (csv_path.empty())
                std::cout << csv;
            else
                write_file(csv_path, csv);
        } else if (*exp) {
            const auto img = palqa::read_pgm(read_file(input));
            const auto sel = select_block(img, q, block);
            warn_saturation(sel.saturated);
            const auto circuit =
                method == "palqa" ? palqa::build_palqa(sel.coeffs) : palqa::build_zscneqr(sel.coeffs);
            const auto text = palqa::export_text(circuit);
            if (output.empty())
                std::cout << text;
            else
                write_file(output, text);
        } else if (*ver) {
            const auto img = palqa::read_pgm(read_file(input));
            const auto sel = select_block(img, q, block);
            warn_saturation(sel.saturated);
            // the circuits carry the clipped magnitudes; compare against those
            const auto expected = palqa::scatter_sparse(sel.coeffs, 1).front();
            const auto report = palqa::verify_block(sel.coeffs, expected, tamper, palqa::max_qubits_from_env());
            std::cout << "block=" << block << "\nQ=" << q << "\ntc_nz=" << sel.coeffs.size()
                      << "\nentries_zscneqr=" << report.entries_zscneqr
                      << "\nentries_palqa=" << report.entries_palqa << "\n";
            for (const auto& c : report.checks) {
                std::cout << c.name << "=" << (c.passed ? "pass" : "fail");
                if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
                std::cout << "\n";
            }
            std::cout << "result=" << (report.passed() ? "pass" : "fail") << "\n";
            if (!report.passed()) throw InvariantFailure("verification failed");
        }
    } catch (const palqa::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const palqa::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const palqa::SimulationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const InvariantFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return 0;
}
