#pragma once

#include "opers/linalg.hpp"
#include "opers/rational_function.hpp"

#include <limits>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

namespace opers {

class AlgebraModel;
using ModelPtr = std::shared_ptr<const AlgebraModel>;

// lambda = lambda_dot + (level / h^vee) rho - delta_shift * delta, lambda_dot in simple-root coordinates.
struct WeightTriple {
    std::vector<GaussRat> lambda_dot;
    GaussRat level;
    GaussRat delta_shift;
};

inline bool coeff_is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool coeff_is_zero(const GaussRat& x) { return x.is_zero(); }
template <class F>
bool coeff_is_zero(const RationalFunction<F>& x) {
    return x.is_zero();
}
inline Rational scaled(const Rational& x, const Rational& c) { return x * c; }
inline GaussRat scaled(const GaussRat& x, const Rational& c) { return x * c; }
inline ExactRF scaled(const ExactRF& x, const Rational& c) { return x * GaussRat(c); }

// Truncated element of the derived loop algebra plus delta and rho components.
// Grade-0 loop coordinates are the Cartan part in simple-coroot coordinates.
template <class T>
class GradedVector {
public:
    GradedVector() = default;
    explicit GradedVector(ModelPtr model) : model_(std::move(model)) {}

    const ModelPtr& model() const { return model_; }
    const std::map<int, std::vector<T>>& grades() const { return comps_; }
    const std::vector<T>* grade(int n) const {
        auto it = comps_.find(n);
        return it == comps_.end() ? nullptr : &it->second;
    }
    T coeff(int n, int i) const {
        auto g = grade(n);
        return g ? (*g)[i] : T();
    }
    std::vector<T>& grade_mut(int n);
    void set(int n, int i, T value) { grade_mut(n)[i] = std::move(value); }
    void add(int n, int i, const T& value) {
        if (coeff_is_zero(value)) return;
        auto& g = grade_mut(n);
        g[i] += value;
    }
    void set_grade(int n, std::vector<T> v) {
        comps_[n] = std::move(v);
        prune_grade(n);
    }
    void erase_grade(int n) { comps_.erase(n); }

    const T& delta() const { return delta_; }
    const T& rho() const { return rho_; }
    void set_delta(T v) { delta_ = std::move(v); }
    void set_rho(T v) { rho_ = std::move(v); }

    bool truncated() const { return truncated_; }
    void mark_truncated() { truncated_ = true; }
    void clear_truncated() { truncated_ = false; }

    void prune() {
        for (auto it = comps_.begin(); it != comps_.end();) {
            if (all_zero(it->second)) it = comps_.erase(it);
            else ++it;
        }
    }
    bool is_zero() const {
        for (const auto& [n, v] : comps_)
            if (!all_zero(v)) return false;
        return coeff_is_zero(delta_) && coeff_is_zero(rho_);
    }
    int max_grade() const { return comps_.empty() ? 0 : comps_.rbegin()->first; }
    int min_grade() const { return comps_.empty() ? 0 : comps_.begin()->first; }

    // Homogeneous grade-n piece (delta and rho included only for n = 0).
    GradedVector part(int n) const {
        GradedVector r(model_);
        if (auto g = grade(n)) r.comps_[n] = *g;
        if (n == 0) {
            r.delta_ = delta_;
            r.rho_ = rho_;
        }
        return r;
    }
    // Drop grades above max_grade.
    GradedVector up_to(int max_grade) const {
        GradedVector r = *this;
        r.comps_.erase(r.comps_.upper_bound(max_grade), r.comps_.end());
        return r;
    }

    template <class Fn>
    GradedVector transform(Fn fn) const {
        GradedVector r(model_);
        for (const auto& [n, v] : comps_) {
            std::vector<T> w;
            w.reserve(v.size());
            for (const auto& x : v) w.push_back(fn(x));
            r.set_grade(n, std::move(w));
        }
        r.delta_ = fn(delta_);
        r.rho_ = fn(rho_);
        r.truncated_ = truncated_;
        return r;
    }

    GradedVector& operator+=(const GradedVector& o);
    GradedVector& operator-=(const GradedVector& o) { return *this += o.negated(); }
    GradedVector negated() const {
        return transform([](const T& x) -> T { return -x; });
    }
    friend GradedVector operator+(GradedVector a, const GradedVector& b) { return a += b; }
    friend GradedVector operator-(GradedVector a, const GradedVector& b) { return a -= b; }
    template <class S>
    GradedVector scaled_by(const S& s) const {
        return transform([&](const T& x) -> T { return x * s; });
    }

    friend bool operator==(const GradedVector& a, const GradedVector& b) {
        GradedVector d = a - b;
        return d.is_zero();
    }
    friend bool operator!=(const GradedVector& a, const GradedVector& b) { return !(a == b); }

private:
    static bool all_zero(const std::vector<T>& v) {
        for (const auto& x : v)
            if (!coeff_is_zero(x)) return false;
        return true;
    }
    void prune_grade(int n) {
        auto it = comps_.find(n);
        if (it != comps_.end() && all_zero(it->second)) comps_.erase(it);
    }

    ModelPtr model_;
    std::map<int, std::vector<T>> comps_;
    T delta_{};
    T rho_{};
    bool truncated_ = false;
};

enum class BasisKind { Cartan, Root };

struct LoopBasisElement {
    BasisKind kind;
    int index;    // Cartan: 0..rank-1; Root: index into AlgebraModel::roots()
    int t_power;  // loop variable power
};

// One copy of a positive exponent; multiplicity-2 exponents give two slots.
struct ExponentSlot {
    int value;
    int copy;
};

// g_n = a_n + c_n in ambient coordinates (loop coordinates; at n = 0 these are
// rank Cartan coordinates followed by delta and rho).
struct GradeDecomposition {
    int grade = 0;
    std::vector<std::vector<Rational>> a_basis;
    std::vector<std::vector<Rational>> c_basis;
    std::vector<int> slots;  // exponent slot of each a_basis vector (n != 0)
    QMatrix coords;          // inverse of [a_basis | c_basis]
    QMatrix solver;          // n >= 0: ambient(n) -> ambient(n+1), see AlgebraModel::solver
};

class AlgebraModel {
public:
    struct BracketEntry {
        int i, j, k;
        Rational c;
    };
    struct PairEntry {
        int i, j;
        Rational c;
    };
    struct BracketTable {
        std::vector<BracketEntry> loop;
        std::vector<PairEntry> delta;  // cocycle, only when the grades sum to zero
    };

    // type in {A, D, E}; cutoff K >= 2. A nonzero shuffle seed permutes the basis order per grade.
    static ModelPtr build(char type, int rank, int cutoff, unsigned shuffle_seed = 0);

    char type() const { return type_; }
    int rank() const { return rank_; }
    int cutoff() const { return cutoff_; }
    int max_grade() const { return cutoff_ + 1; }
    int coxeter_number() const { return h_; }
    int dual_coxeter_number() const { return h_; }
    std::string name() const;

    const std::vector<std::vector<int>>& cartan_matrix() const { return cartan_; }
    std::vector<std::vector<int>> affine_cartan_matrix() const;
    const std::vector<int>& marks() const { return marks_; }
    const std::vector<int>& comarks() const { return marks_; }
    const std::vector<std::vector<int>>& roots() const { return roots_; }
    int root_height(int r) const { return heights_[r]; }
    const std::vector<int>& highest_root() const { return roots_[theta_]; }

    int dim(int grade) const;
    int ambient_dim(int grade) const { return grade == 0 ? rank_ + 2 : dim(grade); }
    const std::vector<LoopBasisElement>& basis(int grade) const;
    std::string label(int grade, int i) const;
    int index_of_label(int grade, const std::string& label) const;

    const BracketTable& bracket_table(int a, int b) const;
    // (x | y) for x in grade a, y in grade -a (loop parts only).
    const std::vector<PairEntry>& form_table(int a) const;

    // Chevalley generators, i = 0..rank; alpha(i) = [e(i), f(i)].
    GradedVector<Rational> e(int i) const;
    GradedVector<Rational> f(int i) const;
    GradedVector<Rational> alpha(int i) const;
    GradedVector<Rational> delta_element() const;
    GradedVector<Rational> rho_element() const;
    // Weight triple as a grade-0 element.
    GradedVector<GaussRat> weight_element(const WeightTriple& w) const;
    WeightTriple simple_root_weight(int i) const;
    WeightTriple rho_weight() const;

    const std::vector<ExponentSlot>& exponents() const { return slots_; }
    std::vector<int> exponent_values() const;
    GradedVector<Rational> p_plus(int slot) const;
    GradedVector<Rational> p_minus(int slot) const;
    GradedVector<Rational> p_minus_one() const;
    GradedVector<Rational> p_one() const;
    const std::vector<Rational>& p_plus_coords(int slot) const { return p_plus_[slot]; }

    const GradeDecomposition& decomposition(int n) const;
    // Matrix of ad_{p_{-1}} : ambient(n) -> ambient(n-1).
    const QMatrix& ad_p_minus_one(int n) const;

    // Ambient coordinate conversions for homogeneous elements.
    template <class T>
    std::vector<T> ambient(const GradedVector<T>& x, int n) const;
    template <class T>
    void add_ambient(GradedVector<T>& x, int n, const std::vector<T>& coords) const;

    GradedVector<Rational> basis_vector(int grade, int i) const;

private:
    AlgebraModel() = default;
    void build_roots();
    void build_bases(unsigned shuffle_seed);
    void build_tables();
    void build_principal();
    int root_index(const std::vector<int>& root) const;
    int grade_of(const LoopBasisElement& e) const;
    int position(int grade, const LoopBasisElement& e) const;
    // Bracket of two basis elements: loop output terms and delta coefficient.
    void bracket_elements(const LoopBasisElement& x, const LoopBasisElement& y,
                          std::vector<std::pair<LoopBasisElement, Rational>>& out,
                          Rational& delta) const;
    Rational form_elements(const LoopBasisElement& x, const LoopBasisElement& y) const;
    int sign(const std::vector<int>& a, const std::vector<int>& b) const;
    int pairing(const std::vector<int>& a, const std::vector<int>& b) const;
    std::shared_ptr<const AlgebraModel> self() const { return self_.lock(); }

    std::weak_ptr<const AlgebraModel> self_;
    char type_ = 'A';
    int rank_ = 1;
    int cutoff_ = 2;
    int h_ = 2;
    std::vector<std::vector<int>> cartan_;
    std::vector<int> marks_;
    std::vector<std::vector<int>> roots_;
    std::vector<int> heights_;
    std::map<std::vector<int>, int> root_lookup_;
    int theta_ = 0;
    std::vector<std::vector<LoopBasisElement>> bases_;  // index grade + max_grade
    std::vector<std::map<std::tuple<int, int, int>, int>> positions_;
    std::vector<BracketTable> tables_;  // (a + M) * (2M + 1) + (b + M)
    std::vector<std::vector<PairEntry>> forms_;
    std::vector<ExponentSlot> slots_;
    std::vector<std::vector<Rational>> p_plus_, p_minus_;
    std::vector<GradeDecomposition> decomps_;  // index n + cutoff
    std::vector<QMatrix> ad_pm1_;              // index n + max_grade
};

// Lie bracket with delta cocycle and rho acting as the grading derivation.
// Output grades above max_out are skipped without flagging truncation.
template <class T>
GradedVector<T> bracket(const GradedVector<T>& x, const GradedVector<T>& y,
                        int max_out = std::numeric_limits<int>::max());

// Invariant bilinear form.
template <class T>
T form(const GradedVector<T>& x, const GradedVector<T>& y);

// (lambda | mu) on weight triples.
GaussRat weight_form(const AlgebraModel& model, const WeightTriple& a, const WeightTriple& b);

// ---------------------------------------------------------------------------

template <class T>
std::vector<T>& GradedVector<T>::grade_mut(int n) {
    auto it = comps_.find(n);
    if (it != comps_.end()) return it->second;
    if (!model_) throw std::logic_error("graded vector without a model");
    if (std::abs(n) > model_->max_grade()) throw std::out_of_range("grade beyond cutoff + 1");
    return comps_.emplace(n, std::vector<T>(model_->dim(n))).first->second;
}

template <class T>
GradedVector<T>& GradedVector<T>::operator+=(const GradedVector& o) {
    if (!model_) model_ = o.model_;
    if (o.model_ && model_ != o.model_) throw std::invalid_argument("model mismatch");
    for (const auto& [n, v] : o.comps_) {
        auto& g = grade_mut(n);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!coeff_is_zero(v[i])) g[i] += v[i];
        prune_grade(n);
    }
    if (!coeff_is_zero(o.delta_)) delta_ += o.delta_;
    if (!coeff_is_zero(o.rho_)) rho_ += o.rho_;
    truncated_ = truncated_ || o.truncated_;
    return *this;
}

template <class T>
GradedVector<T> bracket(const GradedVector<T>& x, const GradedVector<T>& y, int max_out) {
    const ModelPtr& model = x.model() ? x.model() : y.model();
    if (x.model() && y.model() && x.model() != y.model())
        throw std::invalid_argument("model mismatch");
    GradedVector<T> out(model);
    if (!model) return out;
    const int M = model->max_grade();
    for (const auto& [a, xv] : x.grades()) {
        for (const auto& [b, yv] : y.grades()) {
            if (a + b > max_out) break;
            if (std::abs(a + b) > M) {
                out.mark_truncated();
                continue;
            }
            const auto& table = model->bracket_table(a, b);
            if (table.loop.empty() && table.delta.empty()) continue;
            std::vector<T>* target = nullptr;
            for (const auto& e : table.loop) {
                if (coeff_is_zero(xv[e.i]) || coeff_is_zero(yv[e.j])) continue;
                if (!target) target = &out.grade_mut(a + b);
                T prod = xv[e.i] * yv[e.j];
                (*target)[e.k] += scaled(prod, e.c);
            }
            if (!table.delta.empty()) {
                T d{};
                for (const auto& e : table.delta) {
                    if (coeff_is_zero(xv[e.i]) || coeff_is_zero(yv[e.j])) continue;
                    d += scaled(xv[e.i] * yv[e.j], e.c);
                }
                if (!coeff_is_zero(d)) out.set_delta(out.delta() + d);
            }
        }
    }
    // [rho_x rho, y] = rho_x * n * y_n ; [x, rho_y rho] = -rho_y * n * x_n
    if (!coeff_is_zero(x.rho())) {
        for (const auto& [b, yv] : y.grades()) {
            if (b == 0 || b > max_out) continue;
            auto& g = out.grade_mut(b);
            for (std::size_t i = 0; i < yv.size(); ++i)
                if (!coeff_is_zero(yv[i])) g[i] += scaled(x.rho() * yv[i], Rational(b));
        }
    }
    if (!coeff_is_zero(y.rho())) {
        for (const auto& [a, xv] : x.grades()) {
            if (a == 0 || a > max_out) continue;
            auto& g = out.grade_mut(a);
            for (std::size_t i = 0; i < xv.size(); ++i)
                if (!coeff_is_zero(xv[i])) g[i] += scaled(y.rho() * xv[i], Rational(-a));
        }
    }
    out.prune();
    return out;
}

template <class T>
T form(const GradedVector<T>& x, const GradedVector<T>& y) {
    const ModelPtr& model = x.model() ? x.model() : y.model();
    T acc{};
    if (!model) return acc;
    for (const auto& [a, xv] : x.grades()) {
        const auto* yv = y.grade(-a);
        if (!yv) continue;
        for (const auto& e : model->form_table(a)) {
            if (coeff_is_zero(xv[e.i]) || coeff_is_zero((*yv)[e.j])) continue;
            acc += scaled(xv[e.i] * (*yv)[e.j], e.c);
        }
    }
    // (rho | H_i) = 1, (rho | delta) = h^vee, (rho | rho) = 0
    const Rational hv(model->dual_coxeter_number());
    auto rho_against = [&](const T& r, const GradedVector<T>& v) {
        if (coeff_is_zero(r)) return;
        if (const auto* g = v.grade(0))
            for (const auto& c : *g)
                if (!coeff_is_zero(c)) acc += r * c;
        if (!coeff_is_zero(v.delta())) acc += scaled(r * v.delta(), hv);
    };
    rho_against(x.rho(), y);
    rho_against(y.rho(), x);
    return acc;
}

template <class T>
std::vector<T> AlgebraModel::ambient(const GradedVector<T>& x, int n) const {
    std::vector<T> out(ambient_dim(n));
    if (const auto* g = x.grade(n))
        for (int i = 0; i < dim(n); ++i) out[i] = (*g)[i];
    if (n == 0) {
        out[rank_] = x.delta();
        out[rank_ + 1] = x.rho();
    }
    return out;
}

template <class T>
void AlgebraModel::add_ambient(GradedVector<T>& x, int n, const std::vector<T>& coords) const {
    for (int i = 0; i < dim(n); ++i) x.add(n, i, coords[i]);
    if (n == 0) {
        if (!coeff_is_zero(coords[rank_])) x.set_delta(x.delta() + coords[rank_]);
        if (!coeff_is_zero(coords[rank_ + 1])) x.set_rho(x.rho() + coords[rank_ + 1]);
    }
    if (auto g = x.grade(n); g) x.set_grade(n, *g);
}

}  // namespace opers
