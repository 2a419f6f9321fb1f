#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace primeglue {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A finite set of variable names, kept sorted lexicographically.
///
/// Doubles as the representation of a variable-generated prime: the set
/// {x1, x5} stands for the ideal (x1, x5). The empty set is the zero ideal.
class VarPrime {
public:
    VarPrime() = default;
    VarPrime(std::initializer_list<std::string> names) : vars_(names) { canonicalize(); }
    explicit VarPrime(std::vector<std::string> names) : vars_(std::move(names)) { canonicalize(); }

    const std::vector<std::string>& vars() const noexcept { return vars_; }
    std::size_t size() const noexcept { return vars_.size(); }
    bool empty() const noexcept { return vars_.empty(); }
    auto begin() const noexcept { return vars_.begin(); }
    auto end() const noexcept { return vars_.end(); }

    bool contains(const std::string& name) const {
        return std::binary_search(vars_.begin(), vars_.end(), name);
    }

    bool subset_of(const VarPrime& other) const {
        return std::includes(other.vars_.begin(), other.vars_.end(), vars_.begin(), vars_.end());
    }

    bool proper_subset_of(const VarPrime& other) const {
        return size() < other.size() && subset_of(other);
    }

    /// "(x1,x5)"; the zero ideal prints as "()".
    std::string str() const {
        std::string out = "(";
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (i) out += ',';
            out += vars_[i];
        }
        return out + ")";
    }

    friend bool operator==(const VarPrime&, const VarPrime&) = default;
    friend auto operator<=>(const VarPrime& a, const VarPrime& b) { return a.vars_ <=> b.vars_; }

private:
    void canonicalize() {
        std::sort(vars_.begin(), vars_.end());
        vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
    }

    std::vector<std::string> vars_;
};

/// Plain variable sets (U, V, A1, ...) share the representation.
using VarSet = VarPrime;

inline VarSet set_union(const VarSet& a, const VarSet& b) {
    std::vector<std::string> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VarSet(std::move(out));
}

inline VarSet set_intersection(const VarSet& a, const VarSet& b) {
    std::vector<std::string> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VarSet(std::move(out));
}

inline VarSet set_difference(const VarSet& a, const VarSet& b) {
    std::vector<std::string> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VarSet(std::move(out));
}

}  // namespace primeglue
