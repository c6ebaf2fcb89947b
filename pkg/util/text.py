import re
import unicodedata

_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")
_SUBSCRIPTS = str.maketrans("₀₁₂", "012")
_sup_pat = re.compile(r"[⁰¹²³⁴⁵⁶⁷⁸⁹]+")


def normalize_expression(text: str) -> str:
    """
    Texto tipográfico -> gramática de entrada:
    'X₀²·X₁ − 1/4*X2**3' vira 'X0^2*X1 - 1/4*X2^3'.
    """
    s = unicodedata.normalize("NFC", str(text)).strip()
    s = s.translate(_SUBSCRIPTS)
    s = _sup_pat.sub(lambda m: "^" + m.group(0).translate(_SUPERSCRIPTS), s)
    s = s.replace("**", "^")
    s = s.replace("−", "-").replace("–", "-")
    s = s.replace("·", "*").replace("×", "*")
    # x0 -> X0
    s = re.sub(r"\bx([012])\b", r"X\1", s)
    s = " ".join(s.split())
    return s
