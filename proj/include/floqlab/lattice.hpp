#pragma once
// Honeycomb check lattice on an L x L torus of cells, L a multiple of 3.
//
// Each cell (i, j) carries two sites a, b. Links come in three orientations
// and hold two-body checks XX / YY / ZZ:
//   z(i,j): a(i,j) - b(i,j)
//   x(i,j): b(i,j) - a(i,j+1)
//   y(i,j): b(i,j) - a(i+1,j)
// Hexagonal faces are indexed by cell; the face three-coloring assigns color
// (i - j) mod 3 to face (i,j), with links colored so that every vertex meets
// one link of each orientation and one of each color. Round r of the
// measurement schedule measures every check of color (r + 1) mod 3, giving
// the blue, green, red order with red last.
//
// Red links form a perfect matching and carry the effective qubits of the
// condensed description: vertices of the superlattice are the blue and green
// faces, edges are red links, faces are red hexagons. Logical string
// operators come in three flavors per direction: e (product of effective Z
// along a primal path), m (effective Y along a dual path), f (product of raw
// check operators along a closed site path).

#include <array>
#include <cassert>
#include <cstdint>
#include <vector>

#include "json.hpp"

#include "floqlab/pauli.hpp"
#include "floqlab/tableau.hpp"

namespace floqlab {

enum class LinkType : int { XX = 0, YY = 1, ZZ = 2 };
enum class FaceColor : int { Red = 0, Blue = 1, Green = 2 };
enum class StringKind { E, M, F };
enum class StringDir { X, Z, XZ };

inline char link_type_char(LinkType t) { return t == LinkType::XX ? 'X' : t == LinkType::YY ? 'Y' : 'Z'; }
inline const char* face_color_name(FaceColor c) {
    return c == FaceColor::Red ? "red" : c == FaceColor::Blue ? "blue" : "green";
}

struct DisGate {
    enum Kind { H, S, Sdg, CX } kind;
    int a;
    int b = -1;
};

class HoneycombLattice {
public:
    explicit HoneycombLattice(int period) : L_(period) {
        assert(L_ >= 3 && L_ % 3 == 0);
        red_index_.assign(num_links(), -1);
        for (int l = 0; l < num_links(); ++l) {
            if (link_color(l) == FaceColor::Red) {
                red_index_[l] = static_cast<int>(red_links_.size());
                red_links_.push_back(l);
            }
        }
        assert(static_cast<int>(red_links_.size()) == L_ * L_);
    }

    int period() const { return L_; }
    int num_cells() const { return L_ * L_; }
    int num_sites() const { return 2 * L_ * L_; }
    int num_links() const { return 3 * L_ * L_; }
    int num_faces() const { return L_ * L_; }

    // --- indexing -------------------------------------------------------

    int wrap(int v) const { return ((v % L_) + L_) % L_; }
    int cell(int i, int j) const { return wrap(i) * L_ + wrap(j); }
    int site_a(int i, int j) const { return 2 * cell(i, j); }
    int site_b(int i, int j) const { return 2 * cell(i, j) + 1; }
    int link(LinkType t, int i, int j) const { return 3 * cell(i, j) + static_cast<int>(t); }
    int face(int i, int j) const { return cell(i, j); }

    LinkType link_type(int l) const { return static_cast<LinkType>(l % 3); }
    int link_i(int l) const { return (l / 3) / L_; }
    int link_j(int l) const { return (l / 3) % L_; }
    int face_i(int f) const { return f / L_; }
    int face_j(int f) const { return f % L_; }

    std::array<int, 2> link_sites(int l) const {
        const int i = link_i(l), j = link_j(l);
        switch (link_type(l)) {
            case LinkType::ZZ: return {site_a(i, j), site_b(i, j)};
            case LinkType::XX: return {site_b(i, j), site_a(i, j + 1)};
            default: return {site_b(i, j), site_a(i + 1, j)};
        }
    }

    FaceColor face_color(int f) const {
        return static_cast<FaceColor>(((face_i(f) - face_j(f)) % 3 + 3) % 3);
    }

    FaceColor link_color(int l) const {
        const int d = link_i(l) - link_j(l);
        int c = 0;
        switch (link_type(l)) {
            case LinkType::XX: c = d; break;
            case LinkType::YY: c = d + 1; break;
            case LinkType::ZZ: c = d + 2; break;
        }
        return static_cast<FaceColor>(((c % 3) + 3) % 3);
    }

    static FaceColor round_color(int r) {
        assert(r >= 0);
        return static_cast<FaceColor>((r + 1) % 3);
    }

    // The two faces whose boundary contains l.
    std::array<int, 2> link_faces(int l) const {
        const int i = link_i(l), j = link_j(l);
        switch (link_type(l)) {
            case LinkType::ZZ: return {face(i, j), face(i - 1, j + 1)};
            case LinkType::XX: return {face(i - 1, j + 1), face(i, j + 1)};
            default: return {face(i, j), face(i, j + 1)};
        }
    }

    // Boundary links of face (i,j), cyclic order.
    std::array<int, 6> face_links(int f) const {
        const int i = face_i(f), j = face_j(f);
        return {link(LinkType::ZZ, i, j),     link(LinkType::YY, i, j),
                link(LinkType::XX, i + 1, j - 1), link(LinkType::ZZ, i + 1, j - 1),
                link(LinkType::YY, i, j - 1), link(LinkType::XX, i, j - 1)};
    }

    // The three red boundary links of a blue or green face (the super-edges
    // meeting at that superlattice vertex).
    std::array<int, 3> face_red_links(int f) const {
        const int i = face_i(f), j = face_j(f);
        assert(face_color(f) != FaceColor::Red);
        if (face_color(f) == FaceColor::Blue)
            return {link(LinkType::ZZ, i, j), link(LinkType::XX, i + 1, j - 1),
                    link(LinkType::YY, i, j - 1)};
        return {link(LinkType::YY, i, j), link(LinkType::ZZ, i + 1, j - 1),
                link(LinkType::XX, i, j - 1)};
    }

    // The six red links radiating from the vertices of a red face (the
    // boundary of the corresponding superlattice face), cyclic order.
    std::array<int, 6> red_face_star(int f) const {
        const int i = face_i(f), j = face_j(f);
        assert(face_color(f) == FaceColor::Red);
        return {link(LinkType::YY, i - 1, j), link(LinkType::XX, i, j),
                link(LinkType::ZZ, i + 1, j), link(LinkType::YY, i + 1, j - 1),
                link(LinkType::XX, i + 1, j - 2), link(LinkType::ZZ, i, j - 1)};
    }

    // --- operators ------------------------------------------------------

    PauliOperator link_operator(int l) const {
        auto st = link_sites(l);
        const char w = link_type_char(link_type(l));
        PauliOperator p = PauliOperator::single(num_sites(), st[0], w);
        PauliOperator q = PauliOperator::single(num_sites(), st[1], w);
        p *= q;
        return p;
    }

    PauliOperator plaquette_operator(int f) const {
        PauliOperator p = PauliOperator::identity(num_sites());
        for (int l : face_links(f)) p *= link_operator(l);
        return p;
    }

    // --- red links and effective qubits ---------------------------------

    bool is_red(int l) const { return red_index_[l] >= 0; }
    int red_index(int l) const { return red_index_[l]; }
    const std::vector<int>& red_links() const { return red_links_; }

    // Per red link, the kept site hosts the effective qubit and the frozen
    // site ends up stabilized by a bare Z after disentangling.
    int kept_site(int l) const { return link_sites(l)[0]; }
    int frozen_site(int l) const { return link_sites(l)[1]; }

    // Circuit order; conjugating the check by these gates yields Z on the
    // frozen site. The trailing rotation on the kept site fixes the effective
    // frame so that a red face reads as a pure effective-Z plaquette.
    std::vector<DisGate> disentangler(int l) const {
        assert(is_red(l));
        const int a = kept_site(l), b = frozen_site(l);
        switch (link_type(l)) {
            case LinkType::ZZ:
                return {{DisGate::CX, a, b}};
            case LinkType::XX:
                return {{DisGate::CX, b, a}, {DisGate::H, b}, {DisGate::H, a}};
            default:
                return {{DisGate::Sdg, a}, {DisGate::Sdg, b}, {DisGate::CX, b, a},
                        {DisGate::H, b}, {DisGate::H, a}};
        }
    }

    void apply_disentangler(StabilizerState& st) const {
        for (int l : red_links_) {
            for (const DisGate& g : disentangler(l)) {
                switch (g.kind) {
                    case DisGate::H: st.h(g.a); break;
                    case DisGate::S: st.s(g.a); break;
                    case DisGate::Sdg: st.sdg(g.a); break;
                    case DisGate::CX: st.cx(g.a, g.b); break;
                }
            }
        }
    }

    // Physical representative of a single-qubit operator on the effective
    // qubit of red link l: the conjugate of `letter` on the kept site by the
    // inverse disentangler.
    PauliOperator effective_op(int l, char letter) const {
        PauliOperator p = PauliOperator::single(num_sites(), kept_site(l), letter);
        auto gates = disentangler(l);
        for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
            switch (it->kind) {
                case DisGate::H: conj_h(p, it->a); break;
                case DisGate::S: conj_sdg(p, it->a); break;
                case DisGate::Sdg: conj_s(p, it->a); break;
                case DisGate::CX: conj_cx(p, it->a, it->b); break;
            }
        }
        return p;
    }

    PauliOperator effective_z(int l) const { return effective_op(l, 'Z'); }
    PauliOperator effective_y(int l) const { return effective_op(l, 'Y'); }
    PauliOperator effective_x(int l) const { return effective_op(l, 'X'); }

    // Product of effective Z around a superlattice face (red face f).
    PauliOperator super_plaquette(int f) const {
        PauliOperator p = PauliOperator::identity(num_sites());
        for (int l : red_face_star(f)) p *= effective_z(l);
        return p;
    }

    // Product of effective Y over the super-edges at a superlattice vertex
    // (blue or green face f).
    PauliOperator super_vertex(int f) const {
        PauliOperator p = PauliOperator::identity(num_sites());
        for (int l : face_red_links(f)) p *= effective_y(l);
        return p;
    }

    // --- logical strings ------------------------------------------------

    // Underlying links: red links for e (primal path) and m (dual path),
    // raw loop links for f. Directions label the winding: X winds j, Z winds
    // i, XZ winds the diagonal.
    std::vector<int> string_links(StringKind k, StringDir d) const {
        std::vector<int> out;
        const int reps = L_ / 3;
        if (k == StringKind::M) {
            if (d == StringDir::X) {
                for (int m = 0; m < reps; ++m) {
                    out.push_back(link(LinkType::XX, 0, 3 * m));
                    out.push_back(link(LinkType::ZZ, 0, 3 * m + 2));
                }
            } else if (d == StringDir::Z) {
                for (int m = 0; m < reps; ++m) {
                    out.push_back(link(LinkType::YY, 3 * m + 1, -1));
                    out.push_back(link(LinkType::ZZ, 3 * m + 3, -1));
                }
            } else {
                for (int m = 0; m < L_; ++m) out.push_back(link(LinkType::ZZ, m + 1, m));
            }
        } else if (k == StringKind::E) {
            if (d == StringDir::X) {
                for (int m = 0; m < reps; ++m) {
                    const int j = -3 * m;
                    out.push_back(link(LinkType::YY, 1, j - 1));
                    out.push_back(link(LinkType::ZZ, 2, j - 2));
                    out.push_back(link(LinkType::YY, 2, j - 3));
                    out.push_back(link(LinkType::XX, 2, j - 4));
                }
            } else if (d == StringDir::Z) {
                for (int m = 0; m < reps; ++m) {
                    const int i = 1 - 3 * m;
                    out.push_back(link(LinkType::ZZ, i, 0));
                    out.push_back(link(LinkType::XX, i - 1, 0));
                    out.push_back(link(LinkType::YY, i - 2, 0));
                    out.push_back(link(LinkType::XX, i - 2, -1));
                }
            } else {
                // Symmetric difference: the two paths may cross, and shared
                // links cancel in the operator product.
                std::vector<char> in(num_links(), 0);
                for (int l : string_links(StringKind::E, StringDir::X)) in[l] ^= 1;
                for (int l : string_links(StringKind::E, StringDir::Z)) in[l] ^= 1;
                for (int l = 0; l < num_links(); ++l)
                    if (in[l]) out.push_back(l);
            }
        } else {
            if (d == StringDir::X) {
                for (int m = 0; m < L_; ++m) {
                    out.push_back(link(LinkType::ZZ, 0, m));
                    out.push_back(link(LinkType::XX, 0, m));
                }
            } else if (d == StringDir::Z) {
                for (int m = 0; m < L_; ++m) {
                    out.push_back(link(LinkType::ZZ, m, 0));
                    out.push_back(link(LinkType::YY, m, 0));
                }
            } else {
                for (int m = 0; m < L_; ++m) {
                    out.push_back(link(LinkType::YY, m, -m));
                    out.push_back(link(LinkType::XX, m + 1, -m - 1));
                }
            }
        }
        return out;
    }

    PauliOperator logical_string(StringKind k, StringDir d) const {
        PauliOperator p = PauliOperator::identity(num_sites());
        for (int l : string_links(k, d)) {
            if (k == StringKind::E) p *= effective_z(l);
            else if (k == StringKind::M) p *= effective_y(l);
            else p *= link_operator(l);
        }
        return p;
    }

    // --- description ----------------------------------------------------

    nlohmann::json describe() const {
        nlohmann::json j;
        j["period"] = L_;
        j["sites"] = num_sites();
        j["faces"] = nlohmann::json::array();
        for (int f = 0; f < num_faces(); ++f) {
            auto fl = face_links(f);
            j["faces"].push_back({{"id", f},
                                  {"color", face_color_name(face_color(f))},
                                  {"links", std::vector<int>(fl.begin(), fl.end())}});
        }
        j["links"] = nlohmann::json::array();
        for (int l = 0; l < num_links(); ++l) {
            auto ls = link_sites(l);
            auto lf = link_faces(l);
            j["links"].push_back({{"id", l},
                                  {"check", std::string(2, link_type_char(link_type(l)))},
                                  {"color", face_color_name(link_color(l))},
                                  {"sites", std::vector<int>(ls.begin(), ls.end())},
                                  {"faces", std::vector<int>(lf.begin(), lf.end())}});
        }
        j["red_links"] = red_links_;
        return j;
    }

private:
    int L_;
    std::vector<int> red_links_;
    std::vector<int> red_index_;
};

}  // namespace floqlab
