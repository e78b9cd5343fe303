#pragma once

// Plain-text model checkpoints. See docs/checkpoint.md for the layout.

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "evguard/detector/model.hpp"

namespace evguard::detector {

inline constexpr const char* kCheckpointMagic = "evguard-model";
inline constexpr int kCheckpointVersion = 1;

inline void save_model(std::ostream& out, const Model& model) {
    out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
    std::visit(
        [&](const auto& net) {
            using Net = std::decay_t<decltype(net)>;
            std::vector<int> widths;
            if constexpr (std::is_same_v<Net, Mlp>) {
                out << "kind mlp\n";
                out << "hidden_activation " << to_string(net.hidden_activation) << '\n';
                out << "input_width " << net.input_width() << '\n';
                widths = net.hidden_widths();
            } else {
                out << "kind gru\n";
                out << "hidden_activation " << to_string(net.hidden_activation) << '\n';
                out << "sequence_length " << net.sequence_length << '\n';
                widths = net.widths();
            }
            out << "layers";
            for (int w : widths) out << ' ' << w;
            out << '\n';
            const auto ts = tensors(net);
            out << "tensors " << ts.size() << '\n';
            for (const auto& t : ts) {
                out << "tensor " << t.name << ' ' << t.value->rows() << ' ' << t.value->cols() << '\n';
                for (Eigen::Index r = 0; r < t.value->rows(); ++r) {
                    for (Eigen::Index c = 0; c < t.value->cols(); ++c) out << (c ? " " : "") << shortest((*t.value)(r, c));
                    out << '\n';
                }
            }
        },
        model);
    out << "end\n";
}

namespace detail {

class CheckpointReader {
public:
    explicit CheckpointReader(std::istream& in) : in_(in) {}

    std::vector<std::string> line() {
        std::string s;
        if (!std::getline(in_, s)) throw ParseError(line_ + 1, "unexpected end of checkpoint");
        ++line_;
        std::istringstream ss(s);
        std::vector<std::string> out;
        for (std::string w; ss >> w;) out.push_back(w);
        return out;
    }

    std::vector<std::string> keyed(const std::string& key, std::size_t min_values) {
        auto w = line();
        if (w.empty() || w[0] != key || w.size() < min_values + 1)
            throw ParseError(line_, "expected '" + key + "'");
        return w;
    }

    long integer(const std::string& s) {
        long v = 0;
        if (!parse_int(s, v)) throw ParseError(line_, "bad integer '" + s + "'");
        return v;
    }

    double real(const std::string& s) {
        double v = 0;
        if (!parse_double(s, v) || !std::isfinite(v)) throw ParseError(line_, "bad value '" + s + "'");
        return v;
    }

    std::size_t line_no() const { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

}  // namespace detail

inline Model load_model(std::istream& in) {
    detail::CheckpointReader rd(in);
    const auto head = rd.line();
    if (head.size() != 2 || head[0] != kCheckpointMagic) throw ParseError(1, "not an evguard model checkpoint");
    if (rd.integer(head[1]) != kCheckpointVersion) throw ParseError(1, "unsupported checkpoint version " + head[1]);

    const ModelKind kind = parse_model_kind(rd.keyed("kind", 1)[1]);
    const Activation act = parse_activation(rd.keyed("hidden_activation", 1)[1]);
    const long width = rd.integer(rd.keyed(kind == ModelKind::Mlp ? "input_width" : "sequence_length", 1)[1]);
    const auto lw = rd.keyed("layers", 1);
    std::vector<int> widths;
    for (std::size_t i = 1; i < lw.size(); ++i) widths.push_back(static_cast<int>(rd.integer(lw[i])));
    if (width < 1) throw ParseError(rd.line_no(), "width must be >= 1");
    for (int w : widths)
        if (w < 1) throw ParseError(rd.line_no(), "layer width must be >= 1");

    Model model = kind == ModelKind::Mlp ? Model(make_mlp(static_cast<int>(width), widths, act, Init::Uniform, 0))
                                         : Model(make_gru(widths, act, Init::Uniform, 0, static_cast<int>(width)));
    std::visit(
        [&](auto& net) {
            auto ts = tensors(net);
            if (rd.integer(rd.keyed("tensors", 1)[1]) != static_cast<long>(ts.size()))
                throw ParseError(rd.line_no(), "tensor count does not match architecture");
            for (auto& t : ts) {
                const auto h = rd.keyed("tensor", 3);
                if (h[1] != t.name || rd.integer(h[2]) != t.value->rows() || rd.integer(h[3]) != t.value->cols())
                    throw ParseError(rd.line_no(), "expected tensor " + t.name + " " + std::to_string(t.value->rows()) +
                                                       "x" + std::to_string(t.value->cols()));
                for (Eigen::Index r = 0; r < t.value->rows(); ++r) {
                    const auto vals = rd.line();
                    if (static_cast<Eigen::Index>(vals.size()) != t.value->cols())
                        throw ParseError(rd.line_no(), "wrong number of values in row of " + t.name);
                    for (Eigen::Index c = 0; c < t.value->cols(); ++c) (*t.value)(r, c) = rd.real(vals[static_cast<std::size_t>(c)]);
                }
            }
        },
        model);
    const auto tail = rd.line();
    if (tail.size() != 1 || tail[0] != "end") throw ParseError(rd.line_no(), "expected 'end'");
    return model;
}

inline void save_model(const std::filesystem::path& path, const Model& model) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    save_model(out, model);
    if (!out) throw Error("write failed for " + path.string());
}

inline Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return load_model(in);
}

}  // namespace evguard::detector
