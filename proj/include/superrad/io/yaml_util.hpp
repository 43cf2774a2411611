//---------------------------------------------------------------------------//
//! \file superrad/io/yaml_util.hpp
//! Strict YAML field access with positions in every error.
//---------------------------------------------------------------------------//
#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include <yaml-cpp/yaml.h>

#include "../error.hpp"
#include "../units.hpp"

namespace superrad::io::detail
{
[[noreturn]] inline void fail_at(YAML::Node const& node, std::string const& what)
{
    auto mark = node.Mark();
    if (mark.is_null())
        throw ParseError(what);
    throw ParseError(what, mark.line + 1, mark.column + 1);
}

inline YAML::Node load_document(std::string const& text)
{
    try
    {
        return YAML::Load(text);
    }
    catch (YAML::ParserException const& e)
    {
        throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
    }
}

//! Reject any key of a mapping not in \c allowed
inline void
require_keys(YAML::Node const& map, std::string const& where,
             std::initializer_list<std::string_view> allowed)
{
    if (!map.IsMap())
        fail_at(map, "'" + where + "' must be a mapping");
    for (auto const& kv : map)
    {
        auto key = kv.first.as<std::string>();
        bool ok = false;
        for (auto a : allowed)
            ok = ok || key == a;
        if (!ok)
            fail_at(kv.first, "unknown key '" + key + "' in " + where);
    }
}

inline std::string scalar(YAML::Node const& node, std::string const& field)
{
    if (!node.IsScalar())
        fail_at(node, "'" + field + "' must be a scalar");
    return node.Scalar();
}

inline YAML::Node
required(YAML::Node const& map, char const* key, std::string const& where)
{
    auto n = map[key];
    if (!n)
        fail_at(map, "missing required key '" + std::string(key) + "' in "
                         + where);
    return n;
}

//! Parse a dimensioned value, reporting unit errors at the node's position
template<class Q>
Q quantity(YAML::Node const& node, std::string const& field)
{
    auto text = scalar(node, field);
    try
    {
        return parse_quantity<Q>(text);
    }
    catch (DomainError const& e)
    {
        fail_at(node, field + ": " + e.what());
    }
}

template<class Q>
std::optional<Q>
optional_quantity(YAML::Node const& map, char const* key, std::string const& where)
{
    auto n = map[key];
    if (!n)
        return std::nullopt;
    return quantity<Q>(n, where + "." + key);
}

inline int integer(YAML::Node const& node, std::string const& field)
{
    auto text = scalar(node, field);
    try
    {
        std::size_t pos = 0;
        int v = std::stoi(text, &pos);
        if (pos != text.size())
            throw std::invalid_argument(text);
        return v;
    }
    catch (std::exception const&)
    {
        fail_at(node, field + ": expected an integer, got '" + text + "'");
    }
}

inline double number(YAML::Node const& node, std::string const& field)
{
    auto text = scalar(node, field);
    try
    {
        return superrad::detail::parse_number(text);
    }
    catch (DomainError const&)
    {
        fail_at(node, field + ": expected a number, got '" + text + "'");
    }
}
}  // namespace superrad::io::detail
