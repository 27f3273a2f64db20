# ============================================================================
# Évaluation sécurisée d'expressions
# ============================================================================
"""
Évaluation des spécifications de grilles passées en ligne de commande
("t_max=20, points=2**6, eps_max=exp(1)"), sans eval() arbitraire.
Seuls les nombres, l'arithmétique, e, pi, exp, log et sqrt sont acceptés.
"""
import ast
import math
import operator
from typing import Any, Callable, Dict, Optional

# Au-delà, une puissance entière bloquerait l'interpréteur
MAX_EXPONENT = 1024
MAX_POWER_BITS = 4096


def _power(base: float, exponent: float) -> float:
    """Puissance à exposant et taille de résultat bornés"""
    if abs(exponent) > MAX_EXPONENT:
        raise ValueError(f"Exposant trop grand: {exponent!r} (max {MAX_EXPONENT})")
    if isinstance(base, int) and isinstance(exponent, int) and exponent > 0 and abs(base) > 1:
        if exponent * math.log2(abs(base)) > MAX_POWER_BITS:
            raise ValueError(f"Puissance trop grande: {base!r}**{exponent!r}")
    result = operator.pow(base, exponent)
    if isinstance(result, complex):
        raise ValueError(f"Puissance non réelle: {base!r}**{exponent!r}")
    return result


_BINARY: Dict[type, Callable[[float, float], float]] = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: _power,
}

_UNARY: Dict[type, Callable[[float], float]] = {
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


class SafeEvaluator:
    """Évaluateur restreint d'expressions numériques"""

    def __init__(self, allowed_names: Optional[Dict[str, float]] = None):
        """
        Args:
            allowed_names: Constantes supplémentaires (ex: {'n': 5})
        """
        self.constants: Dict[str, float] = {'pi': math.pi, 'e': math.e}
        self.constants.update(allowed_names or {})
        self.functions: Dict[str, Callable[[float], float]] = {
            'exp': math.exp,
            'log': math.log,
            'sqrt': math.sqrt,
        }

    def eval_dict(self, expression: str) -> Dict[str, float]:
        """
        Évalue une liste d'affectations.

        Raises:
            ValueError: Si l'expression est invalide

        Example:
            >>> SafeEvaluator().eval_dict("t_max=20, points=2**6")
            {'t_max': 20, 'points': 64}
        """
        if not expression.strip():
            return {}

        try:
            tree = ast.parse(f"dict({expression})", mode='eval')
        except SyntaxError as e:
            raise ValueError(f"Syntaxe invalide: {e.msg}")

        call = tree.body
        if not isinstance(call, ast.Call) or call.args:
            raise ValueError("Affectations 'clé=valeur' séparées par des virgules attendues")

        result: Dict[str, float] = {}
        for keyword in call.keywords:
            if keyword.arg is None:
                raise ValueError("Dépaquetage '**' non autorisé")
            if keyword.arg in result:
                raise ValueError(f"Clé répétée: {keyword.arg}")
            result[keyword.arg] = self._evaluate(keyword.value)
        return result

    def eval_expression(self, expression: str) -> float:
        """Évalue une expression numérique simple"""
        try:
            tree = ast.parse(expression.strip(), mode='eval')
        except SyntaxError as e:
            raise ValueError(f"Syntaxe invalide: {e.msg}")
        return self._evaluate(tree.body)

    def _evaluate(self, node: ast.AST) -> Any:
        """
        Parcours récursif de l'arbre ; tout nœud non listé est refusé.

        Raises:
            ValueError: Opération non autorisée ou erreur de calcul
        """
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                raise ValueError(f"Constante non numérique: {node.value!r}")
            return node.value

        if isinstance(node, ast.Name):
            if node.id not in self.constants:
                raise ValueError(f"Nom inconnu: {node.id}")
            return self.constants[node.id]

        if isinstance(node, ast.BinOp) and type(node.op) in _BINARY:
            left, right = self._evaluate(node.left), self._evaluate(node.right)
            try:
                return _BINARY[type(node.op)](left, right)
            except (ArithmeticError, ValueError) as e:
                raise ValueError(f"Erreur d'évaluation: {e}")

        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](self._evaluate(node.operand))

        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in self.functions:
                name = getattr(node.func, 'id', node.func.__class__.__name__)
                raise ValueError(f"Fonction non autorisée: {name}")
            if len(node.args) != 1 or node.keywords:
                raise ValueError(f"{node.func.id} attend un seul argument")
            try:
                return self.functions[node.func.id](self._evaluate(node.args[0]))
            except (ArithmeticError, ValueError) as e:
                raise ValueError(f"Erreur d'évaluation: {e}")

        raise ValueError(f"Opération non autorisée: {node.__class__.__name__}")
