#include "opers/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace opers {

namespace {

std::vector<std::vector<int>> finite_cartan(char type, int rank) {
    std::vector<std::vector<int>> a(rank, std::vector<int>(rank, 0));
    auto link = [&](int i, int j) { a[i][j] = a[j][i] = -1; };
    for (int i = 0; i < rank; ++i) a[i][i] = 2;
    switch (type) {
    case 'A':
        if (rank < 1) throw std::invalid_argument("type A needs rank >= 1");
        for (int i = 0; i + 1 < rank; ++i) link(i, i + 1);
        break;
    case 'D':
        if (rank < 4) throw std::invalid_argument("type D needs rank >= 4");
        for (int i = 0; i + 2 < rank; ++i) link(i, i + 1);
        link(rank - 3, rank - 1);
        break;
    case 'E':
        if (rank < 6 || rank > 8) throw std::invalid_argument("type E needs rank 6, 7 or 8");
        // nodes 1 - 3 - 4 - ... - rank with 2 attached to 4 (1-based)
        link(0, 2);
        link(1, 3);
        for (int i = 2; i + 1 < rank; ++i) link(i, i + 1);
        break;
    default:
        throw std::invalid_argument(std::string("unsupported type ") + type);
    }
    return a;
}

int floor_div(int a, int b) { return (a >= 0) ? a / b : -((-a + b - 1) / b); }

}  // namespace

std::string AlgebraModel::name() const { return std::string(1, type_) + std::to_string(rank_); }

int AlgebraModel::pairing(const std::vector<int>& a, const std::vector<int>& b) const {
    int s = 0;
    for (int i = 0; i < rank_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < rank_; ++j) s += a[i] * cartan_[i][j] * b[j];
    }
    return s;
}

// Bimultiplicative sign with eps(a_i, a_j) = -1 for i == j or (i < j and linked).
int AlgebraModel::sign(const std::vector<int>& a, const std::vector<int>& b) const {
    long e = 0;
    for (int i = 0; i < rank_; ++i) {
        e += static_cast<long>(a[i]) * b[i];
        for (int j = i + 1; j < rank_; ++j)
            if (cartan_[i][j] == -1) e += static_cast<long>(a[i]) * b[j];
    }
    return (e % 2 == 0) ? 1 : -1;
}

int AlgebraModel::root_index(const std::vector<int>& root) const {
    auto it = root_lookup_.find(root);
    return it == root_lookup_.end() ? -1 : it->second;
}

void AlgebraModel::build_roots() {
    std::vector<std::vector<int>> pos;
    for (int i = 0; i < rank_; ++i) {
        std::vector<int> r(rank_, 0);
        r[i] = 1;
        pos.push_back(r);
    }
    for (std::size_t k = 0; k < pos.size(); ++k) {
        for (int i = 0; i < rank_; ++i) {
            std::vector<int> simple(rank_, 0);
            simple[i] = 1;
            if (pairing(pos[k], simple) != -1) continue;
            std::vector<int> r = pos[k];
            r[i] += 1;
            if (std::find(pos.begin(), pos.end(), r) == pos.end()) pos.push_back(r);
        }
    }
    auto height = [](const std::vector<int>& r) { return std::accumulate(r.begin(), r.end(), 0); };
    std::stable_sort(pos.begin(), pos.end(),
                     [&](const auto& a, const auto& b) { return height(a) < height(b); });
    roots_ = pos;
    for (const auto& r : pos) {
        std::vector<int> n(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) n[i] = -r[i];
        roots_.push_back(n);
    }
    heights_.clear();
    for (std::size_t k = 0; k < roots_.size(); ++k) {
        heights_.push_back(height(roots_[k]));
        root_lookup_[roots_[k]] = static_cast<int>(k);
    }
    theta_ = static_cast<int>(pos.size()) - 1;
    h_ = heights_[theta_] + 1;
    marks_.assign(1, 1);
    for (int c : roots_[theta_]) marks_.push_back(c);
}

int AlgebraModel::grade_of(const LoopBasisElement& e) const {
    int base = e.kind == BasisKind::Root ? heights_[e.index] : 0;
    return base + e.t_power * h_;
}

void AlgebraModel::build_bases(unsigned shuffle_seed) {
    const int M = max_grade();
    bases_.assign(2 * M + 1, {});
    positions_.assign(2 * M + 1, {});
    for (int n = -M; n <= M; ++n) {
        auto& b = bases_[n + M];
        if (n % h_ == 0)
            for (int i = 0; i < rank_; ++i) b.push_back({BasisKind::Cartan, i, n / h_});
        for (std::size_t r = 0; r < roots_.size(); ++r) {
            int rem = n - heights_[r];
            if (rem % h_ != 0) continue;
            b.push_back({BasisKind::Root, static_cast<int>(r), floor_div(rem, h_)});
        }
        if (shuffle_seed != 0 && n != 0) {
            std::mt19937 rng(shuffle_seed * 7919u + static_cast<unsigned>(n + M));
            std::shuffle(b.begin(), b.end(), rng);
        }
        for (std::size_t i = 0; i < b.size(); ++i)
            positions_[n + M][{static_cast<int>(b[i].kind), b[i].index, b[i].t_power}] =
                static_cast<int>(i);
    }
}

int AlgebraModel::dim(int grade) const {
    const int M = max_grade();
    if (std::abs(grade) > M) throw std::out_of_range("grade beyond cutoff + 1");
    return static_cast<int>(bases_[grade + M].size());
}

const std::vector<LoopBasisElement>& AlgebraModel::basis(int grade) const {
    const int M = max_grade();
    if (std::abs(grade) > M) throw std::out_of_range("grade beyond cutoff + 1");
    return bases_[grade + M];
}

int AlgebraModel::position(int grade, const LoopBasisElement& e) const {
    const auto& m = positions_[grade + max_grade()];
    auto it = m.find({static_cast<int>(e.kind), e.index, e.t_power});
    if (it == m.end()) throw std::logic_error("basis element not found");
    return it->second;
}

std::string AlgebraModel::label(int grade, int i) const {
    if (grade == 0 && i == rank_) return "delta";
    if (grade == 0 && i == rank_ + 1) return "rho";
    const auto& e = basis(grade).at(i);
    std::ostringstream os;
    if (e.kind == BasisKind::Cartan) {
        os << "H" << (e.index + 1);
    } else {
        os << "E[";
        for (int k = 0; k < rank_; ++k) os << (k ? "," : "") << roots_[e.index][k];
        os << "]";
    }
    os << "t" << e.t_power;
    return os.str();
}

int AlgebraModel::index_of_label(int grade, const std::string& text) const {
    for (int i = 0; i < ambient_dim(grade); ++i)
        if (label(grade, i) == text) return i;
    throw std::invalid_argument("unknown basis label '" + text + "' at grade " + std::to_string(grade));
}

Rational AlgebraModel::form_elements(const LoopBasisElement& x, const LoopBasisElement& y) const {
    if (x.kind != y.kind) return 0;
    if (x.kind == BasisKind::Cartan) return cartan_[x.index][y.index];
    const auto& a = roots_[x.index];
    const auto& b = roots_[y.index];
    for (int i = 0; i < rank_; ++i)
        if (a[i] + b[i] != 0) return 0;
    return -1;
}

void AlgebraModel::bracket_elements(const LoopBasisElement& x, const LoopBasisElement& y,
                                    std::vector<std::pair<LoopBasisElement, Rational>>& out,
                                    Rational& delta) const {
    out.clear();
    int t = x.t_power + y.t_power;
    delta = (t == 0) ? Rational(x.t_power) * form_elements(x, y) : Rational(0);
    if (x.kind == BasisKind::Cartan && y.kind == BasisKind::Cartan) return;
    if (x.kind == BasisKind::Cartan) {
        std::vector<int> simple(rank_, 0);
        simple[x.index] = 1;
        int c = pairing(simple, roots_[y.index]);
        if (c) out.push_back({{BasisKind::Root, y.index, t}, Rational(c)});
        return;
    }
    if (y.kind == BasisKind::Cartan) {
        std::vector<int> simple(rank_, 0);
        simple[y.index] = 1;
        int c = pairing(simple, roots_[x.index]);
        if (c) out.push_back({{BasisKind::Root, x.index, t}, Rational(-c)});
        return;
    }
    const auto& a = roots_[x.index];
    const auto& b = roots_[y.index];
    std::vector<int> s(rank_);
    bool zero = true;
    for (int i = 0; i < rank_; ++i) {
        s[i] = a[i] + b[i];
        zero = zero && s[i] == 0;
    }
    if (zero) {
        for (int i = 0; i < rank_; ++i)
            if (a[i]) out.push_back({{BasisKind::Cartan, i, t}, Rational(-a[i])});
        return;
    }
    int r = root_index(s);
    if (r >= 0) out.push_back({{BasisKind::Root, r, t}, Rational(sign(a, b))});
}

void AlgebraModel::build_tables() {
    const int M = max_grade();
    const int W = 2 * M + 1;
    tables_.assign(static_cast<std::size_t>(W) * W, {});
    forms_.assign(W, {});
    std::vector<std::pair<LoopBasisElement, Rational>> terms;
    Rational delta;
    for (int a = -M; a <= M; ++a) {
        for (int b = -M; b <= M; ++b) {
            if (std::abs(a + b) > M) continue;
            auto& table = tables_[static_cast<std::size_t>(a + M) * W + (b + M)];
            const auto& xa = bases_[a + M];
            const auto& yb = bases_[b + M];
            for (std::size_t i = 0; i < xa.size(); ++i)
                for (std::size_t j = 0; j < yb.size(); ++j) {
                    bracket_elements(xa[i], yb[j], terms, delta);
                    for (const auto& [elem, c] : terms)
                        table.loop.push_back({static_cast<int>(i), static_cast<int>(j),
                                              position(a + b, elem), c});
                    if (sgn(delta) != 0)
                        table.delta.push_back({static_cast<int>(i), static_cast<int>(j), delta});
                }
        }
        const auto& xa = bases_[a + M];
        const auto& yb = bases_[-a + M];
        for (std::size_t i = 0; i < xa.size(); ++i)
            for (std::size_t j = 0; j < yb.size(); ++j) {
                if (xa[i].t_power + yb[j].t_power != 0) continue;
                Rational c = form_elements(xa[i], yb[j]);
                if (sgn(c) != 0) forms_[a + M].push_back({static_cast<int>(i), static_cast<int>(j), c});
            }
    }
}

const AlgebraModel::BracketTable& AlgebraModel::bracket_table(int a, int b) const {
    const int M = max_grade();
    if (std::abs(a) > M || std::abs(b) > M || std::abs(a + b) > M)
        throw std::out_of_range("bracket grades beyond cutoff + 1");
    return tables_[static_cast<std::size_t>(a + M) * (2 * M + 1) + (b + M)];
}

const std::vector<AlgebraModel::PairEntry>& AlgebraModel::form_table(int a) const {
    const int M = max_grade();
    if (std::abs(a) > M) throw std::out_of_range("form grade beyond cutoff + 1");
    return forms_[a + M];
}

std::vector<std::vector<int>> AlgebraModel::affine_cartan_matrix() const {
    int n = rank_ + 1;
    std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
    std::vector<int> minus_theta(rank_);
    for (int i = 0; i < rank_; ++i) minus_theta[i] = -roots_[theta_][i];
    a[0][0] = 2;
    for (int i = 0; i < rank_; ++i) {
        std::vector<int> simple(rank_, 0);
        simple[i] = 1;
        a[0][i + 1] = a[i + 1][0] = pairing(minus_theta, simple);
        for (int j = 0; j < rank_; ++j) a[i + 1][j + 1] = cartan_[i][j];
    }
    return a;
}

GradedVector<Rational> AlgebraModel::basis_vector(int grade, int i) const {
    GradedVector<Rational> v(self());
    if (grade == 0 && i == rank_) {
        v.set_delta(1);
    } else if (grade == 0 && i == rank_ + 1) {
        v.set_rho(1);
    } else {
        v.set(grade, i, 1);
    }
    return v;
}

GradedVector<Rational> AlgebraModel::e(int i) const {
    if (i == 0) {
        int r = root_index([&] {
            std::vector<int> m(rank_);
            for (int k = 0; k < rank_; ++k) m[k] = -roots_[theta_][k];
            return m;
        }());
        return basis_vector(1, position(1, {BasisKind::Root, r, 1}));
    }
    return basis_vector(1, position(1, {BasisKind::Root, i - 1, 0}));
}

GradedVector<Rational> AlgebraModel::f(int i) const {
    if (i == 0)
        return basis_vector(-1, position(-1, {BasisKind::Root, theta_, -1})).scaled_by(Rational(-1));
    std::vector<int> neg(rank_, 0);
    neg[i - 1] = -1;
    return basis_vector(-1, position(-1, {BasisKind::Root, root_index(neg), 0})).scaled_by(Rational(-1));
}

GradedVector<Rational> AlgebraModel::alpha(int i) const { return bracket(e(i), f(i)); }

GradedVector<Rational> AlgebraModel::delta_element() const { return basis_vector(0, rank_); }
GradedVector<Rational> AlgebraModel::rho_element() const { return basis_vector(0, rank_ + 1); }

GradedVector<Rational> AlgebraModel::p_minus_one() const {
    GradedVector<Rational> p(self());
    for (int i = 0; i <= rank_; ++i) p += f(i);
    return p;
}

GradedVector<Rational> AlgebraModel::p_one() const {
    GradedVector<Rational> p(self());
    for (int i = 0; i <= rank_; ++i) p += e(i).scaled_by(Rational(marks_[i]));
    return p;
}

std::vector<int> AlgebraModel::exponent_values() const {
    std::vector<int> v;
    for (const auto& s : slots_) v.push_back(s.value);
    return v;
}

GradedVector<Rational> AlgebraModel::p_plus(int slot) const {
    GradedVector<Rational> v(self());
    add_ambient(v, slots_.at(slot).value, p_plus_[slot]);
    return v;
}

GradedVector<Rational> AlgebraModel::p_minus(int slot) const {
    GradedVector<Rational> v(self());
    add_ambient(v, -slots_.at(slot).value, p_minus_[slot]);
    return v;
}

const GradeDecomposition& AlgebraModel::decomposition(int n) const {
    if (std::abs(n) > cutoff_) throw std::out_of_range("decomposition grade beyond cutoff");
    return decomps_[n + cutoff_];
}

const QMatrix& AlgebraModel::ad_p_minus_one(int n) const {
    if (n < -cutoff_ || n > max_grade()) throw std::out_of_range("ad p_-1 grade out of range");
    return ad_pm1_[n + max_grade()];
}

void AlgebraModel::build_principal() {
    const int K = cutoff_;
    const int M = max_grade();
    const GradedVector<Rational> pm1 = p_minus_one();

    ad_pm1_.assign(2 * M + 1, {});
    for (int n = -K; n <= M; ++n) {
        std::vector<std::vector<Rational>> cols;
        for (int i = 0; i < ambient_dim(n); ++i)
            cols.push_back(ambient(bracket(pm1, basis_vector(n, i)), n - 1));
        ad_pm1_[n + M] = QMatrix::from_columns(cols, ambient_dim(n - 1));
    }
    auto ad = [&](int n) -> const QMatrix& { return ad_pm1_[n + M]; };

    // rows of ad(1) without the delta row
    std::vector<int> no_delta;
    for (int r = 0; r < ambient_dim(0); ++r)
        if (r != rank_) no_delta.push_back(r);

    std::vector<std::vector<std::vector<Rational>>> a_raw(2 * K + 1), c_raw(2 * K + 1);
    auto A = [&](int n) -> auto& { return a_raw[n + K]; };
    auto C = [&](int n) -> auto& { return c_raw[n + K]; };

    for (int n = 1; n <= K; ++n) {
        A(n) = (n == 1 ? ad(1).rows_subset(no_delta) : ad(n)).nullspace();
        C(n) = ad(n + 1).column_space();
    }
    {
        std::vector<Rational> d(ambient_dim(0)), r(ambient_dim(0));
        d[rank_] = 1;
        r[rank_ + 1] = 1;
        A(0) = {d, r};
    }
    for (int n = 0; n >= -K; --n) {
        if (n < 0) A(n) = ad(n).nullspace();
        C(n).clear();
        for (const auto& v : C(n + 1)) C(n).push_back(ad(n + 1).apply(v));
    }

    // exponents and normalized principal basis
    slots_.clear();
    p_plus_.clear();
    p_minus_.clear();
    const Rational hv(h_);
    for (int j = 1; j <= K; ++j) {
        int mult = static_cast<int>(A(j).size());
        if (mult != static_cast<int>(A(-j).size()))
            throw std::logic_error("principal subalgebra dimensions do not match");
        if (mult == 0) continue;
        std::vector<std::vector<Rational>> plus = A(j), minus = A(-j);
        if (j == 1) {
            if (mult != 1) throw std::logic_error("exponent 1 must be simple");
            plus = {ambient(p_one(), 1)};
            minus = {ambient(pm1, -1)};
        }
        QMatrix gram(mult, mult);
        for (int a = 0; a < mult; ++a)
            for (int b = 0; b < mult; ++b) {
                GradedVector<Rational> x(self()), y(self());
                add_ambient(x, j, plus[a]);
                add_ambient(y, -j, minus[b]);
                gram(a, b) = form(x, y);
            }
        if (j != 1) {
            QMatrix dual = gram.inverse();
            std::vector<std::vector<Rational>> m2;
            for (int b = 0; b < mult; ++b) {
                std::vector<Rational> v(minus[0].size());
                for (int c = 0; c < mult; ++c)
                    for (std::size_t k = 0; k < v.size(); ++k) v[k] += minus[c][k] * dual(c, b) * hv;
                m2.push_back(v);
            }
            minus = m2;
        } else if (gram(0, 0) != hv) {
            throw std::logic_error("(p_1 | p_-1) differs from the dual Coxeter number");
        }
        for (int a = 0; a < mult; ++a) {
            slots_.push_back({j, a});
            p_plus_.push_back(plus[a]);
            p_minus_.push_back(minus[a]);
        }
    }

    decomps_.assign(2 * K + 1, {});
    for (int n = -K; n <= K; ++n) {
        GradeDecomposition& d = decomps_[n + K];
        d.grade = n;
        if (n == 0) {
            d.a_basis = A(0);
        } else {
            for (std::size_t s = 0; s < slots_.size(); ++s) {
                if (slots_[s].value != std::abs(n)) continue;
                d.a_basis.push_back(n > 0 ? p_plus_[s] : p_minus_[s]);
                d.slots.push_back(static_cast<int>(s));
            }
        }
        d.c_basis = C(n);
        if (static_cast<int>(d.c_basis.size()) != rank_)
            throw std::logic_error("dim c_n differs from the rank");
        std::vector<std::vector<Rational>> cols = d.a_basis;
        cols.insert(cols.end(), d.c_basis.begin(), d.c_basis.end());
        d.coords = QMatrix::from_columns(cols, ambient_dim(n)).inverse();
    }

    // solvers: m_{n+1} with ad_{p_-1}(m_{n+1}) = c-part of x_n
    {
        std::vector<int> rows;
        for (int r = 0; r <= rank_; ++r) rows.push_back(r);
        QMatrix sq = ad(1).rows_subset(rows).inverse();
        QMatrix s(dim(1), ambient_dim(0));
        for (int r = 0; r < dim(1); ++r)
            for (int c = 0; c <= rank_; ++c) s(r, c) = sq(r, c);
        decomps_[K].solver = s;
    }
    for (int n = 1; n <= K; ++n) {
        GradeDecomposition& d = decomps_[n + K];
        std::vector<std::vector<Rational>> lift;
        if (n < K) {
            lift = C(n + 1);
        } else {
            // unit vectors at pivot columns form a complement of the kernel
            const QMatrix& m = ad(n + 1);
            std::vector<int> pivots;
            std::vector<std::vector<Rational>> cols;
            for (int c = 0; c < m.cols() && static_cast<int>(pivots.size()) < rank_; ++c) {
                cols.push_back(m.column(c));
                if (QMatrix::from_columns(cols, m.rows()).rank() > static_cast<int>(pivots.size()))
                    pivots.push_back(c);
                else
                    cols.pop_back();
            }
            for (int p : pivots) {
                std::vector<Rational> v(dim(n + 1));
                v[p] = 1;
                lift.push_back(v);
            }
        }
        int na = static_cast<int>(d.a_basis.size());
        QMatrix c_coords = d.coords.rows_range(na, rank_);
        QMatrix lift_m = QMatrix::from_columns(lift, dim(n + 1));
        QMatrix t = c_coords * ad(n + 1) * lift_m;
        d.solver = lift_m * t.inverse() * c_coords;
    }
}

ModelPtr AlgebraModel::build(char type, int rank, int cutoff, unsigned shuffle_seed) {
    if (cutoff < 1) throw std::invalid_argument("cutoff must be at least 1");
    std::shared_ptr<AlgebraModel> m(new AlgebraModel());
    m->self_ = m;
    m->type_ = type;
    m->rank_ = rank;
    m->cutoff_ = cutoff;
    m->cartan_ = finite_cartan(type, rank);
    m->build_roots();
    m->build_bases(shuffle_seed);
    m->build_tables();
    m->build_principal();
    return m;
}

GradedVector<GaussRat> AlgebraModel::weight_element(const WeightTriple& w) const {
    if (static_cast<int>(w.lambda_dot.size()) != rank_)
        throw std::invalid_argument("weight has the wrong number of components");
    GradedVector<GaussRat> v(self());
    for (int i = 0; i < rank_; ++i) v.add(0, i, w.lambda_dot[i]);
    v.set_rho(w.level / GaussRat(h_));
    v.set_delta(-w.delta_shift);
    return v;
}

WeightTriple AlgebraModel::simple_root_weight(int i) const {
    WeightTriple w{std::vector<GaussRat>(rank_), GaussRat(0), GaussRat(0)};
    if (i == 0) {
        for (int k = 0; k < rank_; ++k) w.lambda_dot[k] = GaussRat(-roots_[theta_][k]);
        w.delta_shift = GaussRat(-1);  // alpha_0 = delta - theta
    } else {
        w.lambda_dot[i - 1] = GaussRat(1);
    }
    return w;
}

WeightTriple AlgebraModel::rho_weight() const {
    return WeightTriple{std::vector<GaussRat>(rank_), GaussRat(h_), GaussRat(0)};
}

GaussRat weight_form(const AlgebraModel& model, const WeightTriple& a, const WeightTriple& b) {
    const int n = model.rank();
    const auto& A = model.cartan_matrix();
    GaussRat acc(0), sa(0), sb(0);
    for (int i = 0; i < n; ++i) {
        sa += a.lambda_dot[i];
        sb += b.lambda_dot[i];
        if (a.lambda_dot[i].is_zero()) continue;
        for (int j = 0; j < n; ++j)
            if (A[i][j]) acc += a.lambda_dot[i] * b.lambda_dot[j] * Rational(A[i][j]);
    }
    GaussRat hv(model.dual_coxeter_number());
    acc += (b.level / hv) * sa + (a.level / hv) * sb;
    acc -= a.delta_shift * b.level + b.delta_shift * a.level;
    return acc;
}

}  // namespace opers
